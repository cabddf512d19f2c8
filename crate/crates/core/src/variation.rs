//! p-variation functionals on sampled paths and two-parameter functions.
//!
//! All suprema are grid-restricted. For piecewise-linear extensions and
//! p >= 1 the dynamic program is exact (inserting a point interior to a
//! straight segment never increases the objective); for raw sampled data it
//! is a lower-bound estimator.

use crate::error::{Error, Result};
use crate::path::{Partition, SampledPath, Tensor2};
use crate::young::Modulus;

/// O(n^2) dynamic programs reject paths above this many samples.
pub const MAX_DP_SAMPLES: usize = 200_000;

/// Result of a p-variation computation, carrying a partition that attains
/// the grid supremum.
#[derive(Clone, Debug)]
pub struct VariationReport {
    pub value: f64,
    pub p: f64,
    pub optimal_partition: Partition,
}

#[derive(Clone, Copy)]
enum PowKind {
    One,
    ThreeHalves,
    Two,
    Three,
    General(f64),
}

impl PowKind {
    fn of(p: f64) -> PowKind {
        if p == 1.0 {
            PowKind::One
        } else if p == 1.5 {
            PowKind::ThreeHalves
        } else if p == 2.0 {
            PowKind::Two
        } else if p == 3.0 {
            PowKind::Three
        } else {
            PowKind::General(p / 2.0)
        }
    }

    /// ||.||^p from the squared norm.
    #[inline(always)]
    fn weight(self, sq: f64) -> f64 {
        match self {
            PowKind::One => sq.sqrt(),
            PowKind::ThreeHalves => {
                let r = sq.sqrt();
                r * r.sqrt()
            }
            PowKind::Two => sq,
            PowKind::Three => sq * sq.sqrt(),
            PowKind::General(half_p) => sq.powf(half_p),
        }
    }
}

fn check_p(p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidParameter(format!(
            "p-variation requires p >= 1 (or infinity), got {p}"
        )));
    }
    Ok(())
}

fn check_size(n: usize) -> Result<()> {
    if n > MAX_DP_SAMPLES {
        return Err(Error::SizeLimit {
            n,
            cap: MAX_DP_SAMPLES,
        });
    }
    Ok(())
}

#[inline(always)]
fn sq_dist(values: &[f64], dim: usize, i: usize, j: usize) -> f64 {
    let a = &values[i * dim..i * dim + dim];
    let b = &values[j * dim..j * dim + dim];
    let mut s = 0.0;
    for k in 0..dim {
        let d = b[k] - a[k];
        s += d * d;
    }
    s
}

/// DP over endpoint-containing subsequences: M[j] = max_{i<j} M[i] + w(i,j).
/// Returns (M, parent).
#[allow(clippy::needless_range_loop)] // hot loop, indexed on purpose
fn subsequence_dp(
    n: usize,
    mut weight: impl FnMut(usize, usize) -> f64,
) -> (Vec<f64>, Vec<usize>) {
    let mut m = vec![0.0; n];
    let mut parent = vec![0usize; n];
    for j in 1..n {
        let mut best = f64::NEG_INFINITY;
        let mut arg = 0usize;
        for i in 0..j {
            let c = m[i] + weight(i, j);
            if c > best {
                best = c;
                arg = i;
            }
        }
        m[j] = best;
        parent[j] = arg;
    }
    (m, parent)
}

fn backtrack(parent: &[usize]) -> Vec<usize> {
    let mut idx = vec![parent.len() - 1];
    while *idx.last().unwrap() != 0 {
        let j = *idx.last().unwrap();
        idx.push(parent[j]);
    }
    idx.reverse();
    idx
}

/// p-variation of the piecewise-linear extension of `path`.
///
/// For finite p this is the exact supremum over all finite partitions,
/// computed by dynamic programming over grid subsequences. `f64::INFINITY`
/// computes `sup ||gamma(t) - gamma(s)||` over grid pairs.
pub fn p_variation(path: &SampledPath, p: f64) -> Result<VariationReport> {
    let n = path.len();
    check_size(n)?;
    if p == f64::INFINITY {
        let mut best = 0.0;
        let mut arg = (0usize, n - 1);
        for i in 0..n {
            for j in (i + 1)..n {
                let d = path.increment_norm(i, j);
                if d > best {
                    best = d;
                    arg = (i, j);
                }
            }
        }
        let mut indices = vec![0, arg.0, arg.1, n - 1];
        indices.sort_unstable();
        indices.dedup();
        return Ok(VariationReport {
            value: best,
            p,
            optimal_partition: Partition::new(indices, path)?,
        });
    }
    check_p(p)?;
    let kind = PowKind::of(p);
    let dim = path.dim();
    let values = path.values_flat();
    let (m, parent) = match dim {
        1 => subsequence_dp(n, |i, j| {
            let d = values[j] - values[i];
            kind.weight(d * d)
        }),
        2 => subsequence_dp(n, |i, j| {
            let dx = values[2 * j] - values[2 * i];
            let dy = values[2 * j + 1] - values[2 * i + 1];
            kind.weight(dx * dx + dy * dy)
        }),
        _ => subsequence_dp(n, |i, j| kind.weight(sq_dist(values, dim, i, j))),
    };
    let value = m[n - 1].max(0.0).powf(1.0 / p);
    Ok(VariationReport {
        value,
        p,
        optimal_partition: Partition::new(backtrack(&parent), path)?,
    })
}

/// Recompute sum(||increment||^p)^(1/p) along a fixed partition.
pub fn variation_along(path: &SampledPath, d: &Partition, p: f64) -> Result<f64> {
    check_p(p)?;
    d.validate_for(path)?;
    let kind = PowKind::of(p);
    let mut s = 0.0;
    for w in d.indices().windows(2) {
        let nrm = path.increment_norm(w[0], w[1]);
        s += kind.weight(nrm * nrm);
    }
    Ok(s.powf(1.0 / p))
}

/// Mesh-restricted variation modulus.
#[derive(Clone, Copy, Debug)]
pub struct MeshModulus {
    pub value: f64,
    /// False when no full partition of mesh <= delta exists on the grid;
    /// the value is then 0 rather than a silently relaxed estimate.
    pub feasible: bool,
}

/// omega_p(path, delta): the p-variation DP restricted to edges with
/// time gap <= delta, over full partitions only.
#[allow(clippy::needless_range_loop)]
pub fn mesh_modulus(path: &SampledPath, p: f64, delta: f64) -> Result<MeshModulus> {
    check_p(p)?;
    if !(delta > 0.0) {
        return Err(Error::InvalidParameter(format!("delta must be > 0, got {delta}")));
    }
    let n = path.len();
    check_size(n)?;
    let kind = PowKind::of(p);
    let times = path.times();
    let mut m = vec![f64::NEG_INFINITY; n];
    m[0] = 0.0;
    let mut lo = 0usize;
    for j in 1..n {
        while times[j] - times[lo] > delta + crate::path::TIME_TOL {
            lo += 1;
        }
        let mut best = f64::NEG_INFINITY;
        for i in lo..j {
            if m[i] == f64::NEG_INFINITY {
                continue;
            }
            let nrm = path.increment_norm(i, j);
            let c = m[i] + kind.weight(nrm * nrm);
            if c > best {
                best = c;
            }
        }
        m[j] = best;
    }
    if m[n - 1] == f64::NEG_INFINITY {
        return Ok(MeshModulus {
            value: 0.0,
            feasible: false,
        });
    }
    Ok(MeshModulus {
        value: m[n - 1].max(0.0).powf(1.0 / p),
        feasible: true,
    })
}

/// Grid-restricted p-variation of a two-parameter function given by the
/// norms of its values on index pairs of an n-point grid.
pub(crate) fn two_param_p_var_norms(
    n: usize,
    p: f64,
    mut norm: impl FnMut(usize, usize) -> f64,
) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidPartition(
            "two-parameter variation needs at least 2 grid points".into(),
        ));
    }
    check_p(p)?;
    check_size(n)?;
    if p == 1.0 {
        let (m, _) = subsequence_dp(n, &mut norm);
        return Ok(m[n - 1].max(0.0));
    }
    let (m, _) = subsequence_dp(n, |i, j| norm(i, j).powf(p));
    Ok(m[n - 1].max(0.0).powf(1.0 / p))
}

/// Grid-restricted 1-variation of a two-parameter function alpha(s, t).
pub fn two_param_one_var(
    alpha: impl Fn(f64, f64) -> Tensor2,
    times: &[f64],
) -> Result<f64> {
    two_param_p_var(alpha, times, 1.0)
}

/// Grid-restricted p-variation of a two-parameter function alpha(s, t).
pub fn two_param_p_var(
    alpha: impl Fn(f64, f64) -> Tensor2,
    times: &[f64],
    p: f64,
) -> Result<f64> {
    two_param_p_var_norms(times.len(), p, |i, j| alpha(times[i], times[j]).frobenius())
}

/// The Hölder-with-modulus constant of the theorem hypotheses, restricted to
/// grid pairs: sup ||gamma(t)-gamma(s)|| / (|t-s|^(1/p) m(t-s)).
///
/// The path must live on [0, 1]; rescale first otherwise.
pub fn holder_constant(path: &SampledPath, p: f64, m: &Modulus) -> Result<f64> {
    if p <= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "holder_constant requires p > 1, got {p}"
        )));
    }
    if (path.duration() - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidPath(format!(
            "holder_constant requires T = 1, got T = {} (use with_unit_time)",
            path.duration()
        )));
    }
    let n = path.len();
    check_size(n)?;
    let inv_p = 1.0 / p;
    let times = path.times();
    let mut sup = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            let gap = times[j] - times[i];
            let mv = m.eval(gap);
            if !(mv > 0.0) {
                return Err(Error::InvalidModulus(format!(
                    "modulus vanishes at positive gap {gap}"
                )));
            }
            let q = path.increment_norm(i, j) / (gap.powf(inv_p) * mv);
            if q > sup {
                sup = q;
            }
        }
    }
    Ok(sup)
}

/// p-variation distance between the path and its piecewise-linear
/// interpolation through D, measured on the full grid.
pub fn wiener_gap(path: &SampledPath, d: &Partition, p: f64) -> Result<f64> {
    let interp = path.interpolate_onto_grid(d)?;
    let diff = path.sub(&interp)?;
    Ok(p_variation(&diff, p)?.value)
}
