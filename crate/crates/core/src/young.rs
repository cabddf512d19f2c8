//! Riemann-Stieltjes integration with refinement-based convergence
//! diagnosis, modulus-function algebra, the extended Young bounds, and the
//! explicit envelope constants.

use serde::Serialize;

use crate::area::IteratedPrefix;
use crate::error::{Error, Result};
use crate::path::{Partition, SampledPath, Tensor2};
use crate::variation::two_param_p_var_norms;

/// Successive-difference estimates inside iterative diagnostics are computed
/// on evaluation grids capped at this many points; estimates stay honest
/// lower bounds of the grid-restricted functionals.
pub const EVAL_GRID_CAP: usize = 4097;

// ---------------------------------------------------------------------------
// Modulus functions
// ---------------------------------------------------------------------------

/// Non-decreasing modulus m on (0, 1]. Supported shapes: t^a,
/// (ln(c/t))^-a, (ln ln(c/t))^-a, products, and the constant 1.
#[derive(Clone, Debug)]
pub enum Modulus {
    Power { a: f64 },
    LogPower { a: f64, c: f64 },
    IterLog { a: f64, c: f64 },
    Product(Box<Modulus>, Box<Modulus>),
    One,
}

/// Flattened decay signature of a modulus product at t -> 0:
/// t^pow * (ln(1/t))^-log * (ln ln(1/t))^-loglog.
#[derive(Clone, Debug, Default)]
pub struct DecaySignature {
    pub pow: f64,
    /// (exponent, shift = ln c) per log factor
    pub log: Vec<(f64, f64)>,
    /// (exponent, shift = ln c) per iterated-log factor
    pub iterlog: Vec<(f64, f64)>,
}

impl DecaySignature {
    pub fn log_total(&self) -> f64 {
        self.log.iter().map(|x| x.0).sum()
    }

    pub fn iterlog_total(&self) -> f64 {
        self.iterlog.iter().map(|x| x.0).sum()
    }

    fn merge(&mut self, other: &DecaySignature) {
        self.pow += other.pow;
        self.log.extend_from_slice(&other.log);
        self.iterlog.extend_from_slice(&other.iterlog);
    }
}

impl Modulus {
    pub fn power(a: f64) -> Result<Modulus> {
        if !(a > 0.0) {
            return Err(Error::InvalidModulus(format!("power exponent must be > 0, got {a}")));
        }
        Ok(Modulus::Power { a })
    }

    pub fn log_power(a: f64, c: f64) -> Result<Modulus> {
        if !(a > 0.0) {
            return Err(Error::InvalidModulus(format!("log exponent must be > 0, got {a}")));
        }
        if !(c >= 2.0) {
            return Err(Error::InvalidModulus(format!("log scale must be >= 2, got {c}")));
        }
        Ok(Modulus::LogPower { a, c })
    }

    pub fn iter_log(a: f64, c: f64) -> Result<Modulus> {
        if !(a > 0.0) {
            return Err(Error::InvalidModulus(format!("log-log exponent must be > 0, got {a}")));
        }
        // need ln(c/t) > 1 on (0, 1]
        if !(c > std::f64::consts::E) {
            return Err(Error::InvalidModulus(format!(
                "log-log scale must exceed e, got {c}"
            )));
        }
        Ok(Modulus::IterLog { a, c })
    }

    pub fn product(a: Modulus, b: Modulus) -> Modulus {
        Modulus::Product(Box::new(a), Box::new(b))
    }

    pub fn one() -> Modulus {
        Modulus::One
    }

    /// m(t) for t in [0, 1]; m(0) is the limit value.
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Modulus::Power { a } => {
                if t <= 0.0 {
                    0.0
                } else {
                    t.powf(*a)
                }
            }
            Modulus::LogPower { a, c } => {
                if t <= 0.0 {
                    0.0
                } else {
                    (c / t).ln().powf(-a)
                }
            }
            Modulus::IterLog { a, c } => {
                if t <= 0.0 {
                    0.0
                } else {
                    (c / t).ln().ln().powf(-a)
                }
            }
            Modulus::Product(m1, m2) => m1.eval(t) * m2.eval(t),
            Modulus::One => 1.0,
        }
    }

    /// m at t = e^-u, stable for every u >= 0 (including u far beyond the
    /// range where e^-u underflows).
    pub fn eval_log(&self, u: f64) -> f64 {
        match self {
            Modulus::Power { a } => (-a * u).exp(),
            Modulus::LogPower { a, c } => (u + c.ln()).powf(-a),
            Modulus::IterLog { a, c } => (u + c.ln()).ln().powf(-a),
            Modulus::Product(m1, m2) => m1.eval_log(u) * m2.eval_log(u),
            Modulus::One => 1.0,
        }
    }

    pub fn signature(&self) -> DecaySignature {
        let mut sig = DecaySignature::default();
        self.collect_signature(&mut sig);
        sig
    }

    fn collect_signature(&self, sig: &mut DecaySignature) {
        match self {
            Modulus::Power { a } => sig.pow += a,
            Modulus::LogPower { a, c } => sig.log.push((*a, c.ln())),
            Modulus::IterLog { a, c } => sig.iterlog.push((*a, c.ln())),
            Modulus::Product(m1, m2) => {
                m1.collect_signature(sig);
                m2.collect_signature(sig);
            }
            Modulus::One => {}
        }
    }

    pub fn vanishes_at_zero(&self) -> bool {
        match self {
            Modulus::One => false,
            Modulus::Product(m1, m2) => m1.vanishes_at_zero() || m2.vanishes_at_zero(),
            _ => true,
        }
    }

    /// Hypotheses of the extended integration theorem: m(0+) = 0 and
    /// m(1) <= 1.
    pub fn theorem_admissible(&self) -> bool {
        self.vanishes_at_zero() && self.eval(1.0) <= 1.0 + 1e-12
    }
}

// ---------------------------------------------------------------------------
// Modulus integral: int_0^1 m1(t) m2(t) / t dt
// ---------------------------------------------------------------------------

/// Value with a rigorous absolute-error bound (quadrature estimate plus the
/// analytic tail bound of the truncated improper integral).
#[derive(Clone, Copy, Debug, Serialize)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
}

#[allow(clippy::too_many_arguments)]
fn adaptive_simpson(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    eps: f64,
    evals: &mut usize,
) -> (f64, f64) {
    fn recurse(
        f: &impl Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        m: f64,
        fm: f64,
        whole: f64,
        eps: f64,
        depth: u32,
        evals: &mut usize,
    ) -> (f64, f64) {
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        *evals += 2;
        let left = (fa + 4.0 * flm + fm) * (m - a) / 6.0;
        let right = (fm + 4.0 * frm + fb) * (b - m) / 6.0;
        let delta = left + right - whole;
        if depth == 0 || *evals > 4_000_000 || delta.abs() <= 15.0 * eps {
            return (left + right + delta / 15.0, delta.abs() / 15.0);
        }
        let (lv, le) = recurse(f, a, fa, m, fm, lm, flm, left, 0.5 * eps, depth - 1, evals);
        let (rv, re) = recurse(f, m, fm, b, fb, rm, frm, right, 0.5 * eps, depth - 1, evals);
        (lv + rv, le + re)
    }

    let m = 0.5 * (a + b);
    let fa = f(a);
    let fb = f(b);
    let fm = f(m);
    *evals += 3;
    let whole = (fa + 4.0 * fm + fb) * (b - a) / 6.0;
    recurse(f, a, fa, b, fb, m, fm, whole, eps, 48, evals)
}

/// Numerical value of int_0^1 m1(t) m2(t) / t dt with target absolute
/// accuracy `tol`. The substitution u = ln(1/t) turns the integrand into
/// m1(e^-u) m2(e^-u) on [0, inf); further exponential substitutions tame the
/// polynomially decaying cases so every convergent kind is integrated over a
/// short interval plus an analytic tail bound.
///
/// Divergent kind combinations are rejected symbolically before any
/// numerics, carrying the witness exponents.
pub fn modulus_integral_tol(m1: &Modulus, m2: &Modulus, tol: f64) -> Result<QuadResult> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tol must be > 0, got {tol}")));
    }
    if !m1.vanishes_at_zero() || !m2.vanishes_at_zero() {
        return Err(Error::InvalidModulus(
            "modulus_integral requires both moduli to vanish at 0".into(),
        ));
    }
    let mut sig = m1.signature();
    sig.merge(&m2.signature());
    let pow = sig.pow;
    let log_total = sig.log_total();
    let loglog_total = sig.iterlog_total();
    let critical_log = (log_total - 1.0).abs() < 1e-12;
    let convergent =
        pow > 0.0 || log_total > 1.0 + 1e-12 || (critical_log && loglog_total > 1.0 + 1e-12);
    if !convergent {
        return Err(Error::DivergentIntegral {
            pow,
            log: log_total,
            loglog: loglog_total,
        });
    }

    // integrand in u, computed factor-wise for stability
    let g_u = {
        let sig = sig.clone();
        move |u: f64| -> f64 {
            let mut v = (-sig.pow * u).exp();
            for &(a, s) in &sig.log {
                v *= (u + s).powf(-a);
            }
            for &(b, s) in &sig.iterlog {
                v *= (u + s).ln().powf(-b);
            }
            v
        }
    };

    let eps_tail = tol / 4.0;
    let eps_quad = tol / 2.0;
    let mut evals = 0usize;

    if pow > 0.0 {
        // exponential decay in u
        let non_pow_at = |u: f64| -> f64 {
            let mut v = 1.0;
            for &(a, s) in &sig.log {
                v *= (u + s).powf(-a);
            }
            for &(b, s) in &sig.iterlog {
                v *= (u + s).ln().powf(-b);
            }
            v
        };
        let mut upper = 16.0f64;
        let mut tail = non_pow_at(upper) * (-pow * upper).exp() / pow;
        while tail > eps_tail && upper < 1e9 {
            upper *= 2.0;
            tail = non_pow_at(upper) * (-pow * upper).exp() / pow;
        }
        let (value, err) = adaptive_simpson(&g_u, 0.0, upper, eps_quad, &mut evals);
        return Ok(QuadResult {
            value,
            abs_error: err + tail,
        });
    }

    let s_min = sig
        .log
        .iter()
        .map(|x| x.1)
        .fold(f64::INFINITY, f64::min);
    let l_total = log_total;
    // stable integrand in w, where u + s_min = e^w
    let g_w = {
        let sig = sig.clone();
        move |w: f64| -> f64 {
            let emw = (-w).exp();
            let mut v = ((1.0 - l_total) * w).exp();
            for &(a, s) in &sig.log {
                v *= (1.0 + (s - s_min) * emw).powf(-a);
            }
            for &(b, s) in &sig.iterlog {
                v *= (w + ((s - s_min) * emw).ln_1p()).powf(-b);
            }
            v
        }
    };
    let w0 = s_min.ln();

    if !critical_log {
        // log_total > 1: exponential decay in w
        let iterlog_at = |w: f64| -> f64 {
            let emw = (-w).exp();
            let mut v = 1.0;
            for &(b, s) in &sig.iterlog {
                v *= (w + ((s - s_min) * emw).ln_1p()).powf(-b);
            }
            v
        };
        let mut upper = (w0 + 8.0).max(8.0);
        let tail_at =
            |w: f64, il: f64| il * ((1.0 - l_total) * w).exp() / (l_total - 1.0);
        let mut tail = tail_at(upper, iterlog_at(upper));
        while tail > eps_tail && upper < 1e7 {
            upper *= 2.0;
            tail = tail_at(upper, iterlog_at(upper));
        }
        let (value, err) = adaptive_simpson(&g_w, w0, upper, eps_quad, &mut evals);
        return Ok(QuadResult {
            value,
            abs_error: err + tail,
        });
    }

    // log_total == 1, loglog_total > 1: one more exponential substitution,
    // w = w0 + e^z - 1.
    let sigma = sig
        .iterlog
        .iter()
        .map(|x| x.1)
        .fold(s_min, f64::min);
    let g_z = move |z: f64| -> f64 {
        let ez = z.exp();
        g_w(w0 + ez - 1.0) * ez
    };
    let tail_at = |z: f64| -> f64 {
        let w = w0 + z.exp() - 1.0;
        // ln(U + sigma) with U = e^w - s_min, computed stably
        let y = w + ((sigma - s_min) * (-w).exp()).ln_1p();
        y.powf(1.0 - loglog_total) / (loglog_total - 1.0)
    };
    let mut upper = 4.0f64;
    let mut tail = tail_at(upper);
    while tail > eps_tail && upper < 700.0 {
        upper *= 1.5;
        tail = tail_at(upper);
    }
    let (value, err) = adaptive_simpson(&g_z, 0.0, upper, eps_quad, &mut evals);
    Ok(QuadResult {
        value,
        abs_error: err + tail,
    })
}

/// [`modulus_integral_tol`] at the default target accuracy 1e-10.
pub fn modulus_integral(m1: &Modulus, m2: &Modulus) -> Result<QuadResult> {
    modulus_integral_tol(m1, m2, 1e-10)
}

// ---------------------------------------------------------------------------
// Constants
// ---------------------------------------------------------------------------

/// Sewing-style stand-in for the Young inequality constant:
/// 2 / (1 - 2^(1-theta)) with theta = 1/p + 1/q. Only defined in the Young
/// regime theta > 1.
pub fn young_constant(p: f64, q: f64) -> Result<f64> {
    if !(p > 1.0) || !(q > 1.0) {
        return Err(Error::InvalidParameter(format!(
            "young_constant requires p, q > 1, got ({p}, {q})"
        )));
    }
    let theta = 1.0 / p + 1.0 / q;
    if theta <= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "young_constant requires 1/p + 1/q > 1, got {theta}"
        )));
    }
    Ok(2.0 / (1.0 - 2f64.powf(1.0 - theta)))
}

/// The two displayed bounds of the extended Young theorem:
/// (8 C1 C2 (2 + I), C1 C2 (15 + 8 I)).
pub fn young_bound_extended(c1: f64, c2: f64, i_m: f64) -> Result<(f64, f64)> {
    for v in [c1, c2, i_m] {
        if !(v >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "young_bound_extended requires non-negative inputs, got {v}"
            )));
        }
    }
    Ok((8.0 * c1 * c2 * (2.0 + i_m), c1 * c2 * (15.0 + 8.0 * i_m)))
}

/// Smallest documented constant C(a, p) with
/// sum_{k<=m} b^k / k^a <= C b^m / m^a for all m >= 1, b = 2^(2(1-1/p)).
///
/// Recipe: C1 = b/(b-1) + 1 (doubled until the induction denominator is
/// positive), then the max of the explicit ratios up to the induction
/// threshold.
pub fn partial_sum_constant(a: f64, p: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::InvalidParameter(format!("requires a > 0, got {a}")));
    }
    if !(p > 1.0) {
        return Err(Error::InvalidParameter(format!("requires p > 1, got {p}")));
    }
    let b = 2f64.powf(2.0 * (1.0 - 1.0 / p));
    let inv_a = 1.0 / a;
    let denom = |c1: f64| (c1 - 1.0).powf(inv_a) * b.powf(inv_a) - c1.powf(inv_a);
    let mut c1 = b / (b - 1.0) + 1.0;
    let mut guard = 0;
    while denom(c1) <= 0.0 {
        c1 *= 2.0;
        guard += 1;
        if guard > 64 {
            return Err(Error::Inconsistency(
                "induction denominator stayed non-positive".into(),
            ));
        }
    }
    let m_max = (c1.powf(inv_a) / denom(c1)).floor() as usize + 1;
    if m_max > 50_000_000 {
        return Err(Error::InvalidParameter(format!(
            "(a, p) = ({a}, {p}) needs {m_max} explicit ratios; out of desk range"
        )));
    }
    // ratio_m = (m^a / b^m) sum_{k<=m} b^k / k^a via the stable recurrence
    // ratio_m = 1 + (1/b) (m/(m-1))^a ratio_{m-1}.
    let mut best = c1;
    let mut ratio = 1.0f64;
    best = best.max(ratio);
    for m in 2..=m_max {
        ratio = 1.0 + (1.0 / b) * (m as f64 / (m as f64 - 1.0)).powf(a) * ratio;
        best = best.max(ratio);
    }
    Ok(best)
}

/// Envelope constants for scaled lacunary sums bounded by M (1 ∧ |t-s|):
/// `holder` multiplies |t-s|^(1/p) (ln(2/(t-s)))^-a, `p_var` divides N^a in
/// the p-variation decay bound.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct EnvelopeConstants {
    pub holder: f64,
    pub p_var: f64,
}

pub fn envelope_constants(a: f64, p: f64, m_bound: f64) -> Result<EnvelopeConstants> {
    if !(m_bound > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "requires M > 0, got {m_bound}"
        )));
    }
    let cap = partial_sum_constant(a, p)?;
    let ln4 = 4f64.ln();
    let holder =
        ln4.powf(a) * 2f64.powf(-1.0 / p) * m_bound * (8.0 * cap + 1.0 / (2f64.powf(2.0 / p) - 1.0));
    let p_var = (ln4.powf(-a * p) * holder.powf(p)
        + 2.0 * m_bound.powf(p) * (1.0 - 2f64.powf(-2.0 / p)).powf(-p))
    .powf(1.0 / p);
    Ok(EnvelopeConstants { holder, p_var })
}

// ---------------------------------------------------------------------------
// Refinement-based Riemann-Stieltjes integration
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ConvergenceStatus {
    Converged,
    Diverging,
    Oscillating,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceLevel {
    pub mesh: f64,
    /// I^(D_i)(0, T)
    pub value: Tensor2,
    /// 1-variation estimate of I^(D_i) - I^(D_{i-1}) on the finer grid
    pub diff_one_var: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceReport {
    pub status: ConvergenceStatus,
    pub levels: Vec<ConvergenceLevel>,
    /// int_0^T gamma1 (x) dgamma2 when converged
    pub final_value: Option<Tensor2>,
    /// t |-> int_0^t gamma1 (x) dgamma2 on the full grid when converged
    pub integral_path: Option<Vec<Tensor2>>,
}

/// Divergence threshold: final magnitude above 1000x the coarsest nonzero
/// level, or 10 successive increases.
const DIVERGENCE_FACTOR: f64 = 1e3;
const DIVERGENCE_RUN: usize = 10;
/// Oscillation: at least 3 direction alternations of successive value
/// deltas with amplitude ratio >= 0.5.
const OSCILLATION_ALTERNATIONS: usize = 3;
const OSCILLATION_AMPLITUDE_RATIO: f64 = 0.5;

/// Evenly spaced subsample with deterministic jitter. A plain stride would
/// alias away exactly the frequency content introduced by the last dyadic
/// refinement; the jitter keeps it visible to the estimators.
pub(crate) fn capped_indices(indices: &[usize], cap: usize) -> Vec<usize> {
    if indices.len() <= cap {
        return indices.to_vec();
    }
    let n = indices.len();
    let stride = (n - 1) as f64 / (cap - 1) as f64;
    let mut state = 0x9E3779B97F4A7C15u64;
    let mut out: Vec<usize> = (0..cap)
        .map(|j| {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            let u = (state >> 11) as f64 / (1u64 << 53) as f64;
            let pos = (j as f64 * stride + (u - 0.5) * 0.8 * stride)
                .round()
                .clamp(0.0, (n - 1) as f64) as usize;
            indices[pos]
        })
        .collect();
    out[0] = indices[0];
    *out.last_mut().unwrap() = indices[n - 1];
    out.sort_unstable();
    out.dedup();
    out
}

/// Riemann-Stieltjes integral of gamma1 against gamma2, diagnosed through a
/// nested refinement schedule ending at the full grid. Per level it computes
/// the iterated integral of the piecewise-linear restrictions and the
/// 1-variation estimate of the successive difference; the level sequence is
/// classified as converged / diverging / oscillating / inconclusive.
pub fn rs_integrate(
    path1: &SampledPath,
    path2: &SampledPath,
    schedule: &[Partition],
    tol: f64,
) -> Result<ConvergenceReport> {
    path1.check_same_grid(path2)?;
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tol must be > 0, got {tol}")));
    }
    if schedule.is_empty() {
        return Err(Error::InvalidPartition("empty refinement schedule".into()));
    }
    for w in schedule.windows(2) {
        if !w[1].refines(&w[0]) {
            return Err(Error::InvalidPartition(
                "schedule is not a nested refinement sequence".into(),
            ));
        }
    }
    if !schedule.last().unwrap().is_full() {
        return Err(Error::InvalidPartition(
            "schedule must end at the full grid".into(),
        ));
    }
    let n = path1.len();
    let mut levels: Vec<ConvergenceLevel> = Vec::with_capacity(schedule.len());
    let mut values: Vec<Tensor2> = Vec::with_capacity(schedule.len());

    struct LevelData {
        q1: SampledPath,
        q2: SampledPath,
    }
    let mut prev: Option<(LevelData, Vec<Tensor2>)> = None;

    for part in schedule {
        part.validate_for(path1)?;
        let q1 = path1.interpolate_onto_grid(part)?;
        let q2 = path2.interpolate_onto_grid(part)?;
        let prefix_owner = IteratedPrefix::new(&q1, &q2)?;
        let value = prefix_owner.eval_idx(0, n - 1)?;
        let diff = if let Some((prev_data, _)) = &prev {
            let prev_prefix = IteratedPrefix::new(&prev_data.q1, &prev_data.q2)?;
            let eval_idx = capped_indices(part.indices(), EVAL_GRID_CAP);
            let d = two_param_p_var_norms(eval_idx.len(), 1.0, |a, b| {
                prefix_owner.diff_norm(&prev_prefix, eval_idx[a], eval_idx[b])
            })?;
            Some(d)
        } else {
            None
        };
        levels.push(ConvergenceLevel {
            mesh: part.mesh(path1),
            value: value.clone(),
            diff_one_var: diff,
        });
        values.push(value);
        prev = Some((LevelData { q1, q2 }, Vec::new()));
    }

    let diffs: Vec<f64> = levels.iter().filter_map(|l| l.diff_one_var).collect();
    let norms: Vec<f64> = values.iter().map(|v| v.frobenius()).collect();

    let converged = diffs.len() >= 2 && {
        let last = diffs[diffs.len() - 1];
        let prev_d = diffs[diffs.len() - 2];
        last <= tol && prev_d <= tol && last <= prev_d
    };

    let diverging = {
        let scale0 = norms.iter().copied().find(|&x| x > 0.0).unwrap_or(0.0);
        let blown = scale0 > 0.0 && *norms.last().unwrap() > DIVERGENCE_FACTOR * scale0;
        let mut run = 0usize;
        let mut max_run = 0usize;
        for w in norms.windows(2) {
            if w[1] > w[0] {
                run += 1;
                max_run = max_run.max(run);
            } else {
                run = 0;
            }
        }
        blown || max_run >= DIVERGENCE_RUN
    };

    let oscillating = {
        let deltas: Vec<Tensor2> = values
            .windows(2)
            .map(|w| w[1].sub(&w[0]).expect("same dim"))
            .collect();
        let mut alternations = 0usize;
        for w in deltas.windows(2) {
            let a0 = w[0].frobenius();
            let a1 = w[1].frobenius();
            if w[0].inner(&w[1]) < 0.0 && a1 >= OSCILLATION_AMPLITUDE_RATIO * a0 {
                alternations += 1;
            }
        }
        alternations >= OSCILLATION_ALTERNATIONS
    };

    let status = if converged {
        ConvergenceStatus::Converged
    } else if diverging {
        ConvergenceStatus::Diverging
    } else if oscillating {
        ConvergenceStatus::Oscillating
    } else {
        ConvergenceStatus::Inconclusive
    };

    let (final_value, integral_path) = if status == ConvergenceStatus::Converged {
        let full = schedule.last().unwrap();
        let q1 = path1.interpolate_onto_grid(full)?;
        let q2 = path2.interpolate_onto_grid(full)?;
        let prefix = IteratedPrefix::new(&q1, &q2)?;
        let base1 = path1.value(0).to_vec();
        let mut out_path = Vec::with_capacity(n);
        for j in 0..n {
            let mut v = prefix.eval_idx(0, j)?;
            let inc2 = path2.increment(0, j)?;
            let beta = Tensor2::outer(&base1, &inc2)?;
            v.add_assign(&beta);
            out_path.push(v);
        }
        (Some(out_path[n - 1].clone()), Some(out_path))
    } else {
        (None, None)
    };

    Ok(ConvergenceReport {
        status,
        levels,
        final_value,
        integral_path,
    })
}
