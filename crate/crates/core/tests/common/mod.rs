//! Shared generators for the integration suites. Everything is seeded;
//! no test depends on ambient randomness.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use roughlab_core::path::{uniform_times, SampledPath};

#[allow(dead_code)]
pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Uniform[-1, 1] piecewise-linear path on a uniform grid.
#[allow(dead_code)]
pub fn rand_path(rng: &mut StdRng, n: usize, d: usize) -> SampledPath {
    let times = uniform_times(n, 1.0);
    let values: Vec<f64> = (0..n * d).map(|_| rng.random_range(-1.0..1.0)).collect();
    SampledPath::new(times, values, d).unwrap()
}

#[allow(dead_code)]
fn gaussian(rng: &mut StdRng) -> f64 {
    // Box-Muller
    let u1: f64 = rng.random_range(1e-12..1.0);
    let u2: f64 = rng.random_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Midpoint-displacement path with Hölder-like regularity `hurst`, on
/// 2^levels + 1 points. For hurst > 2/3 these paths have finite
/// 1.5-variation with margin.
#[allow(dead_code)]
pub fn fbm_like(rng: &mut StdRng, levels: u32, hurst: f64, d: usize) -> SampledPath {
    let n = (1usize << levels) + 1;
    let mut values = vec![0.0f64; n * d];
    for k in 0..d {
        values[(n - 1) * d + k] = gaussian(rng);
    }
    let mut step = n - 1;
    let mut scale = 0.5f64.powf(hurst);
    while step >= 2 {
        let half = step / 2;
        let mut i = 0;
        while i + step < n {
            for k in 0..d {
                let mid = 0.5 * (values[i * d + k] + values[(i + step) * d + k]);
                values[(i + half) * d + k] = mid + scale * gaussian(rng);
            }
            i += step;
        }
        step = half;
        scale *= 0.5f64.powf(hurst);
    }
    SampledPath::new(uniform_times(n, 1.0), values, d).unwrap()
}

/// Runs a named acceptance criterion, printing exactly one line.
#[allow(dead_code)]
pub fn criterion(name: &str, limit_secs: f64, body: impl FnOnce() + std::panic::UnwindSafe) {
    let start = std::time::Instant::now();
    match std::panic::catch_unwind(body) {
        Ok(()) => {
            let dt = start.elapsed().as_secs_f64();
            println!("[PASS] {name} ({dt:.2} s)");
            assert!(
                dt < limit_secs,
                "{name}: runtime {dt:.2} s exceeded budget {limit_secs} s"
            );
        }
        Err(e) => {
            println!("[FAIL] {name}");
            std::panic::resume_unwind(e);
        }
    }
}
