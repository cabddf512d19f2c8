//! Enhancibility diagnostics: refinement probes of piecewise-linear areas,
//! the boundedness/equicontinuity probe, the sufficient modulus condition,
//! and the candidate enhancement value.
//!
//! A finite-data probe cannot prove a limit statement; verdicts are
//! evidence-graded with an explicit inconclusive state, and every threshold
//! below is configuration, not a claim. All comparisons are relative, so
//! verdicts are invariant under value scaling.

use serde::Serialize;

use crate::area::AreaPrefix;
use crate::error::{Error, Result};
use crate::path::{Partition, SampledPath, Tensor2};
use crate::variation::{holder_constant, two_param_p_var_norms};
use crate::young::{capped_indices, modulus_integral, Modulus, QuadResult, EVAL_GRID_CAP};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ProbeVerdict {
    #[serde(rename = "enhancible-evidence")]
    EnhancibleEvidence,
    #[serde(rename = "non-enhancible-evidence")]
    NonEnhancibleEvidence,
    #[serde(rename = "inconclusive")]
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeLevel {
    pub mesh: f64,
    /// 1-variation estimate of A(gamma^{D_i}) - A(gamma^{D_{i-1}}) on the
    /// finer grid of the pair
    pub diff_one_var: Option<f64>,
    /// 1-variation estimate of A(gamma^{D_i}) on the finest evaluation grid
    pub sup_one_var: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DeltaSup {
    pub delta: f64,
    pub sup: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeReport {
    pub verdict: ProbeVerdict,
    pub levels: Vec<ProbeLevel>,
    /// max over levels of sup_{|t-s| <= delta} ||A(gamma^{D_i})(s, t)||
    pub equicontinuity_modulus: Vec<DeltaSup>,
}

/// Evidence rules for the probes. Defaults follow the documented choices:
/// geometric decay factor 0.7 and growth factor 1.5 over a 3-level window.
#[derive(Clone, Debug)]
pub struct ProbeConfig {
    pub tol: f64,
    pub decay_factor: f64,
    pub growth_factor: f64,
    pub window: usize,
    /// estimates are evaluated on grids capped at this many points
    pub eval_cap: usize,
    /// mesh ladder for the equicontinuity table, as fractions of T
    pub delta_fractions: Vec<f64>,
    pub max_levels: Option<usize>,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            tol: 1e-8,
            decay_factor: 0.7,
            growth_factor: 1.5,
            window: 3,
            eval_cap: EVAL_GRID_CAP,
            delta_fractions: vec![0.25, 1.0 / 16.0, 1.0 / 64.0, 1.0 / 256.0],
            max_levels: None,
        }
    }
}

fn validate_schedule(path: &SampledPath, schedule: &[Partition]) -> Result<()> {
    if schedule.len() < 3 {
        return Err(Error::InvalidPartition(
            "probe schedule needs at least 3 levels".into(),
        ));
    }
    for part in schedule {
        part.validate_for(path)?;
    }
    for w in schedule.windows(2) {
        if !w[1].refines(&w[0]) {
            return Err(Error::InvalidPartition(
                "probe schedule is not nested".into(),
            ));
        }
    }
    Ok(())
}

struct ProbeData {
    levels: Vec<ProbeLevel>,
    equicontinuity: Vec<DeltaSup>,
    sups: Vec<f64>,
    diffs: Vec<f64>,
}

fn probe_levels(
    path: &SampledPath,
    schedule: &[Partition],
    cfg: &ProbeConfig,
) -> Result<ProbeData> {
    validate_schedule(path, schedule)?;
    let schedule = match cfg.max_levels {
        Some(m) if m >= 3 && m < schedule.len() => &schedule[..m],
        _ => schedule,
    };
    let finest = capped_indices(schedule.last().unwrap().indices(), cfg.eval_cap);
    let deltas: Vec<f64> = cfg
        .delta_fractions
        .iter()
        .map(|f| f * path.duration())
        .collect();
    let mut eq_sups = vec![0.0f64; deltas.len()];

    let mut levels: Vec<ProbeLevel> = Vec::with_capacity(schedule.len());
    let mut sups = Vec::with_capacity(schedule.len());
    let mut diffs = Vec::new();
    let mut prev_interp: Option<SampledPath> = None;

    for part in schedule {
        let interp = path.interpolate_onto_grid(part)?;
        let prefix = AreaPrefix::new(&interp);
        let sup = two_param_p_var_norms(finest.len(), 1.0, |a, b| {
            prefix.eval_norm(finest[a], finest[b])
        })?;
        // equicontinuity table on the finest grid
        for a in 0..finest.len() {
            for b in (a + 1)..finest.len() {
                let gap = path.time(finest[b]) - path.time(finest[a]);
                let nrm = prefix.eval_norm(finest[a], finest[b]);
                for (d, s) in deltas.iter().zip(eq_sups.iter_mut()) {
                    if gap <= *d && nrm > *s {
                        *s = nrm;
                    }
                }
            }
        }
        let diff = if let Some(prev) = &prev_interp {
            let prev_prefix = AreaPrefix::new(prev);
            let eval_idx = capped_indices(part.indices(), cfg.eval_cap);
            let d = two_param_p_var_norms(eval_idx.len(), 1.0, |a, b| {
                prefix.diff_norm(&prev_prefix, eval_idx[a], eval_idx[b])
            })?;
            diffs.push(d);
            Some(d)
        } else {
            None
        };
        levels.push(ProbeLevel {
            mesh: part.mesh(path),
            diff_one_var: diff,
            sup_one_var: sup,
        });
        sups.push(sup);
        prev_interp = Some(interp);
    }

    let equicontinuity = deltas
        .into_iter()
        .zip(eq_sups)
        .map(|(delta, sup)| DeltaSup { delta, sup })
        .collect();

    Ok(ProbeData {
        levels,
        equicontinuity,
        sups,
        diffs,
    })
}

/// True when a window of `window` consecutive entries grows strictly with
/// total factor >= `factor`.
fn has_growth_window(seq: &[f64], window: usize, factor: f64) -> bool {
    if window < 2 || seq.len() < window {
        return false;
    }
    'outer: for start in 0..=(seq.len() - window) {
        let w = &seq[start..start + window];
        if !(w[0] > 0.0) {
            continue;
        }
        for pair in w.windows(2) {
            if pair[1] <= pair[0] {
                continue 'outer;
            }
        }
        if w[window - 1] >= factor * w[0] {
            return true;
        }
    }
    false
}

/// Geometric decay over the tail window: the last `window` differences are
/// non-increasing and shrink by `factor` per level overall.
fn decay_ok(diffs: &[f64], window: usize, factor: f64) -> bool {
    if diffs.len() < 2 {
        return false;
    }
    let w = window.min(diffs.len()).max(2);
    let tail = &diffs[diffs.len() - w..];
    for pair in tail.windows(2) {
        if pair[1] > pair[0] {
            return false;
        }
    }
    let first = tail[0];
    let last = tail[w - 1];
    if first == 0.0 {
        return last == 0.0;
    }
    last <= factor.powi(w as i32 - 1) * first
}

/// Cauchy-decay probe of A(gamma^D) along a nested refinement schedule.
///
/// Verdict rules (configuration, not claims): enhancible evidence when the
/// successive-difference estimates decay geometrically (factor <=
/// `decay_factor` over the last window) or the final difference falls below
/// `tol` times the estimate scale; non-enhancible evidence when the
/// per-level 1-variation estimates or the differences grow through a
/// `window`-level window by `growth_factor`; otherwise inconclusive.
pub fn enhancibility_probe(
    path: &SampledPath,
    schedule: &[Partition],
    cfg: &ProbeConfig,
) -> Result<ProbeReport> {
    let data = probe_levels(path, schedule, cfg)?;
    let zero_area = data.sups.iter().all(|&s| s == 0.0);
    let scale = data.sups.iter().cloned().fold(0.0, f64::max);
    let verdict = if zero_area {
        ProbeVerdict::EnhancibleEvidence
    } else {
        let abs_ok = data
            .diffs
            .last()
            .map(|&d| d <= cfg.tol * scale)
            .unwrap_or(false);
        if decay_ok(&data.diffs, cfg.window, cfg.decay_factor) || abs_ok {
            ProbeVerdict::EnhancibleEvidence
        } else if has_growth_window(&data.sups, cfg.window, cfg.growth_factor)
            || has_growth_window(&data.diffs, cfg.window, cfg.growth_factor)
        {
            ProbeVerdict::NonEnhancibleEvidence
        } else {
            ProbeVerdict::Inconclusive
        }
    };
    Ok(ProbeReport {
        verdict,
        levels: data.levels,
        equicontinuity_modulus: data.equicontinuity,
    })
}

/// Boundedness/equicontinuity probe: same level quantities, verdict keyed
/// to stabilization of the per-level 1-variation estimates rather than
/// Cauchy decay of differences.
pub fn weak_geometric_probe(
    path: &SampledPath,
    schedule: &[Partition],
    delta_fractions: Option<Vec<f64>>,
    cfg: &ProbeConfig,
) -> Result<ProbeReport> {
    let mut cfg = cfg.clone();
    if let Some(d) = delta_fractions {
        if d.is_empty() || d.iter().any(|&x| !(x > 0.0)) {
            return Err(Error::InvalidParameter("bad delta ladder".into()));
        }
        cfg.delta_fractions = d;
    }
    let data = probe_levels(path, schedule, &cfg)?;
    let zero_area = data.sups.iter().all(|&s| s == 0.0);
    let scale = data.sups.iter().cloned().fold(0.0, f64::max);
    let verdict = if zero_area {
        ProbeVerdict::EnhancibleEvidence
    } else if has_growth_window(&data.sups, cfg.window, cfg.growth_factor) {
        ProbeVerdict::NonEnhancibleEvidence
    } else {
        let n = data.sups.len();
        let stabilized = (data.sups[n - 1] - data.sups[n - 2]).abs() <= 0.05 * scale;
        if stabilized {
            ProbeVerdict::EnhancibleEvidence
        } else {
            ProbeVerdict::Inconclusive
        }
    };
    Ok(ProbeReport {
        verdict,
        levels: data.levels,
        equicontinuity_modulus: data.equicontinuity,
    })
}

/// Outcome of the sufficient modulus condition for enhancibility.
#[derive(Clone, Debug, Serialize)]
pub struct SufficientCondition {
    pub predicted: bool,
    /// grid Hölder-with-modulus constant at exponent 1/2
    pub holder: f64,
    /// int_0^1 m^2/t dt when finite
    pub integral: Option<QuadResult>,
    /// m(0+) = 0 and m(1) <= 1
    pub admissible: bool,
}

/// Checks the sufficient condition: finite Hölder-with-modulus constant at
/// exponent 1/2 together with a finite modulus square integral.
pub fn sufficient_condition_check(path: &SampledPath, m: &Modulus) -> Result<SufficientCondition> {
    let holder = holder_constant(path, 2.0, m)?;
    let integral = match modulus_integral(m, m) {
        Ok(q) => Some(q),
        Err(Error::DivergentIntegral { .. }) => None,
        Err(e) => return Err(e),
    };
    let admissible = m.theorem_admissible();
    let predicted = admissible && holder.is_finite() && integral.is_some();
    Ok(SufficientCondition {
        predicted,
        holder,
        integral,
        admissible,
    })
}

/// Level sequence of A(gamma^{D_i})(s, t) with a Cauchy status; when the
/// deltas have dropped below tol relative to scale, `value` is the candidate
/// enhancement at (s, t).
#[derive(Clone, Debug, Serialize)]
pub struct EnhancementValue {
    pub value: Tensor2,
    pub converged: bool,
    pub levels: Vec<(f64, Tensor2)>,
}

pub fn enhancement_value(
    path: &SampledPath,
    s: f64,
    t: f64,
    schedule: &[Partition],
    tol: f64,
) -> Result<EnhancementValue> {
    validate_schedule(path, schedule)?;
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tol must be > 0, got {tol}")));
    }
    let i = path.index_of_time(s)?;
    let j = path.index_of_time(t)?;
    if i > j {
        return Err(Error::InvalidParameter(format!(
            "enhancement_value needs s <= t, got ({s}, {t})"
        )));
    }
    let mut levels: Vec<(f64, Tensor2)> = Vec::with_capacity(schedule.len());
    for part in schedule {
        let interp = path.interpolate_onto_grid(part)?;
        let prefix = AreaPrefix::new(&interp);
        levels.push((part.mesh(path), prefix.eval_idx(i, j)?));
    }
    let scale = levels
        .iter()
        .map(|(_, v)| v.frobenius())
        .fold(0.0, f64::max);
    let n = levels.len();
    let last_delta = levels[n - 1].1.sub(&levels[n - 2].1)?.frobenius();
    let converged = scale == 0.0 || last_delta <= tol * scale;
    Ok(EnhancementValue {
        value: levels[n - 1].1.clone(),
        converged,
        levels,
    })
}
