//! Cross-module checks: envelope constants against materialized lacunary
//! paths, Young-type bounds realized on random pairs, interpolation-gap
//! decay, the oscillating refinement diagnosis, and the analytic trig area
//! against dense piecewise-linear sampling.

mod common;

use common::{fbm_like, rand_path, rng};
use roughlab_core::area::{trig_area, AreaPrefix, IteratedPrefix};
use roughlab_core::enhance::enhancement_value;
use roughlab_core::lacunary::{
    harmonic_blocks, modulus_at_dyadic, unit_blocks, weighted_blocks, LacunarySeries,
    NecessityPair, SignSchedule,
};
use roughlab_core::path::{
    dyadic_grid_times, dyadic_schedule, uniform_times, Partition, SampledPath,
    Tensor2,
};
use roughlab_core::variation::{
    holder_constant, mesh_modulus, p_variation, two_param_one_var, wiener_gap,
};
use roughlab_core::young::{
    envelope_constants, rs_integrate, young_constant, ConvergenceStatus, Modulus,
};

fn truncated_alternating(k_max: u64) -> LacunarySeries {
    let blocks = harmonic_blocks(3.2, 2, 1).unwrap();
    LacunarySeries::alternating(blocks, Some(k_max)).unwrap()
}

#[test]
fn mesh_modulus_respects_envelope() {
    // omega_2(f, delta) <= C(1/2, 2, 1) (ln(2/delta))^(-1/2)
    let f = truncated_alternating(6);
    let path = f.sample(dyadic_grid_times(7)).unwrap();
    let c = envelope_constants(0.5, 2.0, 1.0).unwrap().holder;
    for e in [4, 8, 12] {
        let delta = 0.5f64.powi(e);
        let m = mesh_modulus(&path, 2.0, delta).unwrap();
        assert!(m.feasible);
        let envelope = c * (2.0 / delta).ln().powf(-0.5);
        assert!(
            m.value <= envelope,
            "delta = 2^-{e}: {} > {envelope}",
            m.value
        );
    }
}

#[test]
fn holder_constant_of_truncated_series_below_envelope() {
    let f = truncated_alternating(6);
    let path = f.sample(dyadic_grid_times(6)).unwrap();
    let m = Modulus::log_power(0.5, 2.0).unwrap();
    let c = holder_constant(&path, 2.0, &m).unwrap();
    let envelope = envelope_constants(0.5, 2.0, 1.0).unwrap().holder;
    assert!(c.is_finite() && c > 0.0);
    assert!(c <= envelope, "{c} > {envelope}");
}

#[test]
fn wiener_gap_decreases_along_dyadic_levels() {
    let f = truncated_alternating(6);
    let path = f.sample(dyadic_grid_times(7)).unwrap();
    let mut last = f64::INFINITY;
    for n in 2..=6u32 {
        let d = Partition::dyadic(&path, n).unwrap();
        let gap = wiener_gap(&path, &d, 2.0).unwrap();
        assert!(gap < last, "n = {n}: {gap} >= {last}");
        last = gap;
    }
}

#[test]
fn trig_area_of_first_block_against_dense_sampling() {
    // analytic area of the normalized first-block series versus the
    // piecewise-linear closed form on ~2e5 samples, on a 64-point window grid
    let blocks = unit_blocks(2, 1).unwrap();
    let g1 = LacunarySeries::single_block(&blocks, 1, true).unwrap();
    let spec = g1.to_trig_path().unwrap();
    let dense_n = 63 * 3000 + 1;
    let sampled = g1.sample(uniform_times(dense_n, 1.0)).unwrap();
    let pre = AreaPrefix::new(&sampled);
    for wi in 0..8usize {
        for wj in (wi + 1)..8 {
            let i = wi * 9 * 3000;
            let j = wj * 9 * 3000;
            let exact = spec.area(sampled.time(i), sampled.time(j)).unwrap();
            let approx = pre.eval_idx(i, j).unwrap();
            let err = exact.sub(&approx).unwrap().max_abs();
            assert!(err < 1e-4, "window ({wi}, {wj}): {err}");
        }
    }
}

#[test]
fn young_inequality_realized_on_random_pairs() {
    // ||I(g1, g2)||_1-var <= C(p, q) ||g1||_p ||g2||_q on mild random pairs
    let mut r = rng(0xC0FFEE);
    let (p, q) = (1.5, 1.5);
    let c = young_constant(p, q).unwrap();
    for _ in 0..10 {
        let g1 = fbm_like(&mut r, 7, 0.8, 1);
        let g2 = fbm_like(&mut r, 7, 0.8, 1);
        let v1 = p_variation(&g1, p).unwrap().value;
        let v2 = p_variation(&g2, q).unwrap().value;
        let prefix = IteratedPrefix::new(&g1, &g2).unwrap();
        let alpha = |s: f64, t: f64| {
            let i = g1.index_of_time(s).unwrap();
            let j = g1.index_of_time(t).unwrap();
            prefix.eval_idx(i, j).unwrap()
        };
        let one_var = two_param_one_var(alpha, g1.times()).unwrap();
        assert!(
            one_var <= c * v1 * v2,
            "Young bound violated: {one_var} > {c} * {v1} * {v2}"
        );
    }
}

#[test]
fn representative_point_choice_is_negligible() {
    // left-point vs midpoint Riemann sums differ by at most
    // omega_p(g1, 2 delta) * omega_q(g2, 2 delta)
    let mut r = rng(42);
    let g1 = fbm_like(&mut r, 7, 0.8, 1);
    let g2 = fbm_like(&mut r, 7, 0.8, 1);
    let n = g1.len();
    let delta = g1.time(1) - g1.time(0);
    let mut left = 0.0;
    let mut mid = 0.0;
    for k in 0..n - 1 {
        let inc = g2.value(k + 1)[0] - g2.value(k)[0];
        left += g1.value(k)[0] * inc;
        mid += 0.5 * (g1.value(k)[0] + g1.value(k + 1)[0]) * inc;
    }
    let w1 = mesh_modulus(&g1, 2.0, 2.0 * delta).unwrap().value;
    let w2 = mesh_modulus(&g2, 2.0, 2.0 * delta).unwrap().value;
    assert!(
        (left - mid).abs() <= w1 * w2 * (1.0 + 1e-9),
        "{} > {}",
        (left - mid).abs(),
        w1 * w2
    );
}

#[test]
fn oscillating_pair_is_diagnosed() {
    // modulus-driven pair with per-index alternating signs and a divergent
    // modulus square integral: the refinement values alternate without
    // shrinking, and the diagnosis reports oscillation
    let c = 2.0 * std::f64::consts::E;
    let m = Modulus::log_power(0.25, c).unwrap();
    let k_max = 7u64;
    let bounds: Vec<u64> = (1..=k_max + 1).collect(); // unit blocks: sign flips every k
    let signs = SignSchedule::alternating_boundaries(&bounds).unwrap();
    let pair = NecessityPair::new(m.clone(), m, 2.0, signs, k_max).unwrap();
    let times = dyadic_grid_times(8);
    let g1 = pair.sample1(times.clone()).unwrap();
    let g2 = pair.sample2(times).unwrap();
    let sched = dyadic_schedule(&g1, 1, 8).unwrap();
    let rep = rs_integrate(&g1, &g2, &sched, 1e-4).unwrap();
    assert_eq!(
        rep.status,
        ConvergenceStatus::Oscillating,
        "levels: {:?}",
        rep.levels
            .iter()
            .map(|l| (l.mesh, l.value.get(0, 0)))
            .collect::<Vec<_>>()
    );
}

#[test]
fn modulus_weighted_blocks_drive_growing_oscillation() {
    // blocks accumulated against w(k) = m1(4^-k) m2(4^-k) with c > pi: the
    // alternating-sign pair swings by one block weight sum per boundary,
    // and the divergent modulus makes the swings grow
    let c_mod = 2.0 * std::f64::consts::E;
    let m = Modulus::log_power(0.25, c_mod).unwrap();
    let w = {
        let m = m.clone();
        move |k: u64| {
            let v = modulus_at_dyadic(&m, k);
            v * v
        }
    };
    let blocks = weighted_blocks(w, 3.2, 1, 3).unwrap();
    let boundaries = blocks.boundaries().to_vec();
    assert!(boundaries.len() == 4 && boundaries[0] == 1);
    let signs = SignSchedule::alternating(&blocks);
    let k_max = boundaries.last().unwrap() - 1;
    let pair = NecessityPair::new(m.clone(), m, 2.0, signs, k_max).unwrap();
    let value_at = |n: u64| {
        if n < 2 {
            0.0
        } else {
            pair.bracket_closed(n).unwrap()
        }
    };
    let mut swings = Vec::new();
    for wnd in boundaries.windows(2) {
        swings.push((value_at(wnd[1]) - value_at(wnd[0])).abs());
    }
    assert!(swings[1] > swings[0] && swings[2] > swings[1], "{swings:?}");
    // and each swing is at least the lower bound 4 c^j of its block sum
    for (j, s) in swings.iter().enumerate() {
        assert!(*s >= 0.5 * 4.0 * 3.2f64.powi(j as i32 + 1), "block {j}: {s}");
    }
}

#[test]
fn enhancement_candidate_is_multiplicative_when_converged() {
    let path = SampledPath::from_fn(dyadic_grid_times(5), 2, |t| {
        vec![
            (std::f64::consts::TAU * t).cos() + 0.3 * t,
            (std::f64::consts::TAU * t).sin() - t * t,
        ]
    })
    .unwrap();
    let sched = dyadic_schedule(&path, 1, 5).unwrap();
    let n = path.len();
    let (s, u, t) = (0.0, path.time(n / 2), 1.0);
    let tol = 1e-3;
    let a_st = enhancement_value(&path, s, t, &sched, tol).unwrap();
    let a_su = enhancement_value(&path, s, u, &sched, tol).unwrap();
    let a_ut = enhancement_value(&path, u, t, &sched, tol).unwrap();
    assert!(a_st.converged && a_su.converged && a_ut.converged);
    let i = path.index_of_time(u).unwrap();
    let b = roughlab_core::path::lie_bracket(
        &path.increment(0, i).unwrap(),
        &path.increment(i, n - 1).unwrap(),
    )
    .unwrap();
    let mut defect = a_st.value.sub(&a_su.value).unwrap().sub(&a_ut.value).unwrap();
    defect.add_assign_scaled(&b, -0.5);
    // the final level is the full grid, where the identity is exact
    assert!(defect.frobenius() <= 1e-12);
}

#[test]
fn area_one_var_against_young_bound_on_random_paths() {
    // two_param 1-var of the exact area <= C(p, p) ||gamma||_p^2, p = 1.5
    let mut r = rng(0xABCD);
    let c = young_constant(1.5, 1.5).unwrap();
    for _ in 0..10 {
        let path = fbm_like(&mut r, 7, 0.8, 2);
        let v = p_variation(&path, 1.5).unwrap().value;
        let pre = AreaPrefix::new(&path);
        let alpha = |s: f64, t: f64| {
            let i = path.index_of_time(s).unwrap();
            let j = path.index_of_time(t).unwrap();
            pre.eval_idx(i, j).unwrap()
        };
        let one_var = two_param_one_var(alpha, path.times()).unwrap();
        assert!(one_var <= c * v * v, "{one_var} > {c} * {v}^2");
    }
}

#[test]
fn two_param_one_var_matches_enumeration_on_small_grid() {
    // exact area of the triangle loop on its 4-point grid
    let path = SampledPath::from_points(
        vec![0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0],
        &[
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
            vec![0.0, 0.0],
        ],
    )
    .unwrap();
    let pre = AreaPrefix::new(&path);
    let alpha = |s: f64, t: f64| {
        let i = path.index_of_time(s).unwrap();
        let j = path.index_of_time(t).unwrap();
        pre.eval_idx(i, j).unwrap()
    };
    let dp = two_param_one_var(alpha, path.times()).unwrap();
    // brute force over all endpoint-containing subsequences of the 4 points
    let mut best: f64 = 0.0;
    for mask in 0..4u32 {
        let mut idx = vec![0usize];
        for b in 0..2 {
            if mask & (1 << b) != 0 {
                idx.push(b + 1);
            }
        }
        idx.push(3);
        let mut s = 0.0;
        for w in idx.windows(2) {
            s += pre.eval_idx(w[0], w[1]).unwrap().frobenius();
        }
        best = best.max(s);
    }
    assert!((dp - best).abs() <= 1e-14, "{dp} vs {best}");
}

#[test]
fn rand_path_riemann_identity_spot_check() {
    // guard for the generator itself: endpoints kept, duration 1
    let mut r = rng(5);
    let p = rand_path(&mut r, 37, 3);
    assert_eq!(p.len(), 37);
    assert_eq!(p.duration(), 1.0);
    let mut rhs = Tensor2::zeros(3);
    let d = Partition::full(&p);
    for w in d.indices().windows(2) {
        rhs.add_assign(&Tensor2::bracket(p.value(w[0]), p.value(w[1])).unwrap());
    }
    let a = roughlab_core::area::riemann_bracket_sum(&p, &d).unwrap();
    assert_eq!(a.sub(&rhs).unwrap().max_abs(), 0.0);
}

#[test]
fn gn_area_drift_is_unit() {
    // normalized single-block series: the analytic area drift coefficient
    // pi sum a_k^2 w_k equals 1 by construction
    let blocks = unit_blocks(2, 2).unwrap();
    for n in 1..=2usize {
        let g = LacunarySeries::single_block(&blocks, n, true).unwrap();
        let spec = g.to_trig_path().unwrap();
        let mut drift = 0.0;
        for t in spec.terms() {
            drift += std::f64::consts::PI * t.amplitude * t.amplitude * t.frequency;
        }
        assert!((drift - 1.0).abs() < 1e-12, "block {n}: {drift}");
    }
    // the area over [0, 1] is then close to (t - s) = 1
    let g1 = LacunarySeries::single_block(&blocks, 1, true).unwrap();
    let a = trig_area(&g1.to_trig_path().unwrap(), 0.0, 1.0).unwrap();
    assert!((a.get(0, 1) - 1.0).abs() < 0.2, "{}", a.get(0, 1));
}
