//! Exact Lévy areas and iterated integrals of piecewise-linear paths, and
//! analytic areas for trigonometric polynomial paths.
//!
//! For a piecewise-linear path interpolating gamma on its grid,
//!
//!   A(gamma)(s, t) = 1/2 sum_k [gamma(t_k), gamma(t_{k+1})]
//!                    - 1/2 [gamma(s), gamma(t)],
//!
//! which this module evaluates in O(1) per (s, t) pair after an O(n) prefix
//! pass. Iterated integrals use the per-segment closed form 1/2 d1 (x) d2
//! chained by the additive Chen recursion; no quadrature anywhere.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::path::{lie_bracket, Partition, SampledPath, Tensor2};

// ---------------------------------------------------------------------------
// Piecewise-linear Lévy area
// ---------------------------------------------------------------------------

/// Prefix sums of bracket terms for O(1) area evaluation on grid pairs.
pub struct AreaPrefix<'a> {
    path: &'a SampledPath,
    /// prefix[j] = 1/2 sum_{k<j} [gamma(t_k), gamma(t_{k+1})]
    prefix: Vec<Tensor2>,
}

impl<'a> AreaPrefix<'a> {
    pub fn new(path: &'a SampledPath) -> Self {
        let n = path.len();
        let d = path.dim();
        let mut prefix = Vec::with_capacity(n);
        let mut acc = Tensor2::zeros(d);
        prefix.push(acc.clone());
        for k in 0..n - 1 {
            let b = Tensor2::bracket(path.value(k), path.value(k + 1)).expect("same dim");
            acc.add_assign_scaled(&b, 0.5);
            prefix.push(acc.clone());
        }
        AreaPrefix { path, prefix }
    }

    pub fn path(&self) -> &SampledPath {
        self.path
    }

    /// A(gamma)(t_i, t_j).
    pub fn eval_idx(&self, i: usize, j: usize) -> Result<Tensor2> {
        let n = self.path.len();
        if i > j || j >= n {
            return Err(Error::IndexOutOfRange(format!("area over ({i}, {j})")));
        }
        let mut a = self.prefix[j].sub(&self.prefix[i])?;
        let corr = Tensor2::bracket(self.path.value(i), self.path.value(j))?;
        a.add_assign_scaled(&corr, -0.5);
        Ok(a)
    }

    /// Frobenius norm of A(t_i, t_j) without allocating.
    #[inline]
    pub fn eval_norm(&self, i: usize, j: usize) -> f64 {
        let d = self.path.dim();
        let pi = self.prefix[i].entries();
        let pj = self.prefix[j].entries();
        let vi = self.path.value(i);
        let vj = self.path.value(j);
        let mut s = 0.0;
        for a in 0..d {
            for b in (a + 1)..d {
                let e = pj[a * d + b] - pi[a * d + b] - 0.5 * (vi[a] * vj[b] - vi[b] * vj[a]);
                s += 2.0 * e * e;
            }
        }
        s.sqrt()
    }

    /// Frobenius norm of (A_self - A_other)(t_i, t_j); both prefixes must be
    /// built over the same grid.
    #[inline]
    pub fn diff_norm(&self, other: &AreaPrefix, i: usize, j: usize) -> f64 {
        let d = self.path.dim();
        let pi = self.prefix[i].entries();
        let pj = self.prefix[j].entries();
        let qi = other.prefix[i].entries();
        let qj = other.prefix[j].entries();
        let vi = self.path.value(i);
        let vj = self.path.value(j);
        let wi = other.path.value(i);
        let wj = other.path.value(j);
        let mut s = 0.0;
        for a in 0..d {
            for b in (a + 1)..d {
                let e1 = pj[a * d + b] - pi[a * d + b] - 0.5 * (vi[a] * vj[b] - vi[b] * vj[a]);
                let e2 = qj[a * d + b] - qi[a * d + b] - 0.5 * (wi[a] * wj[b] - wi[b] * wj[a]);
                let e = e1 - e2;
                s += 2.0 * e * e;
            }
        }
        s.sqrt()
    }
}

/// Exact Lévy area of the piecewise-linear path over grid times [s, t].
pub fn area_pl(path: &SampledPath, s: f64, t: f64) -> Result<Tensor2> {
    let i = path.index_of_time(s)?;
    let j = path.index_of_time(t)?;
    if i > j {
        return Err(Error::InvalidParameter(format!("area_pl needs s <= t, got ({s}, {t})")));
    }
    AreaPrefix::new(path).eval_idx(i, j)
}

/// sum_k [gamma(t_k), gamma(t_{k+1})] along a partition.
pub fn riemann_bracket_sum(path: &SampledPath, d: &Partition) -> Result<Tensor2> {
    d.validate_for(path)?;
    let mut acc = Tensor2::zeros(path.dim());
    for w in d.indices().windows(2) {
        let b = Tensor2::bracket(path.value(w[0]), path.value(w[1]))?;
        acc.add_assign(&b);
    }
    Ok(acc)
}

/// Multiplicativity defect
/// ||alpha(s,t) - alpha(s,u) - alpha(u,t) - 1/2 [gamma(u)-gamma(s), gamma(t)-gamma(u)]||.
pub fn chen_defect(
    alpha: impl Fn(f64, f64) -> Tensor2,
    path: &SampledPath,
    s: f64,
    u: f64,
    t: f64,
) -> Result<f64> {
    let i = path.index_of_time(s)?;
    let k = path.index_of_time(u)?;
    let j = path.index_of_time(t)?;
    if i > k || k > j {
        return Err(Error::InvalidParameter(format!(
            "chen_defect needs s <= u <= t, got ({s}, {u}, {t})"
        )));
    }
    let mut defect = alpha(s, t);
    defect = defect.sub(&alpha(s, u))?;
    defect = defect.sub(&alpha(u, t))?;
    let b = lie_bracket(&path.increment(i, k)?, &path.increment(k, j)?)?;
    defect.add_assign_scaled(&b, -0.5);
    Ok(defect.frobenius())
}

// ---------------------------------------------------------------------------
// Iterated integrals of piecewise-linear pairs
// ---------------------------------------------------------------------------

/// Prefix representation of I(gamma1, gamma2)(0, .) for O(1) evaluation of
/// I(s, t) via the Chen recursion
///   I(s, t) = P(t) - P(s) - (gamma1(s) - gamma1(0)) (x) (gamma2(t) - gamma2(s)).
pub struct IteratedPrefix<'a> {
    path1: &'a SampledPath,
    path2: &'a SampledPath,
    prefix: Vec<Tensor2>,
}

impl<'a> IteratedPrefix<'a> {
    pub fn new(path1: &'a SampledPath, path2: &'a SampledPath) -> Result<Self> {
        path1.check_same_grid(path2)?;
        let n = path1.len();
        let d = path1.dim();
        let mut prefix = Vec::with_capacity(n);
        let mut acc = Tensor2::zeros(d);
        prefix.push(acc.clone());
        let base = path1.value(0).to_vec();
        for k in 0..n - 1 {
            let d1 = path1.increment(k, k + 1)?;
            let d2 = path2.increment(k, k + 1)?;
            // segment term 1/2 d1 (x) d2 plus cross term (gamma1(t_k) - gamma1(0)) (x) d2
            let seg = Tensor2::outer(&d1, &d2)?;
            acc.add_assign_scaled(&seg, 0.5);
            let lead: Vec<f64> = path1
                .value(k)
                .iter()
                .zip(&base)
                .map(|(a, b)| a - b)
                .collect();
            let cross = Tensor2::outer(&lead, &d2)?;
            acc.add_assign(&cross);
            prefix.push(acc.clone());
        }
        Ok(IteratedPrefix {
            path1,
            path2,
            prefix,
        })
    }

    /// I(gamma1, gamma2)(t_i, t_j).
    pub fn eval_idx(&self, i: usize, j: usize) -> Result<Tensor2> {
        if i > j || j >= self.prefix.len() {
            return Err(Error::IndexOutOfRange(format!(
                "iterated integral over ({i}, {j})"
            )));
        }
        let mut out = self.prefix[j].sub(&self.prefix[i])?;
        let lead = self.path1.increment(0, i)?;
        let inc2 = self.path2.increment(i, j)?;
        let corr = Tensor2::outer(&lead, &inc2)?;
        out = out.sub(&corr)?;
        Ok(out)
    }

    /// Frobenius norm of (I_self - I_other)(t_i, t_j), no allocation.
    pub fn diff_norm(&self, other: &IteratedPrefix, i: usize, j: usize) -> f64 {
        let d = self.path1.dim();
        let mut s = 0.0;
        let pi = self.prefix[i].entries();
        let pj = self.prefix[j].entries();
        let qi = other.prefix[i].entries();
        let qj = other.prefix[j].entries();
        for a in 0..d {
            let lead1 = self.path1.value(i)[a] - self.path1.value(0)[a];
            let lead2 = other.path1.value(i)[a] - other.path1.value(0)[a];
            for b in 0..d {
                let inc1 = self.path2.value(j)[b] - self.path2.value(i)[b];
                let inc2 = other.path2.value(j)[b] - other.path2.value(i)[b];
                let e1 = pj[a * d + b] - pi[a * d + b] - lead1 * inc1;
                let e2 = qj[a * d + b] - qi[a * d + b] - lead2 * inc2;
                let e = e1 - e2;
                s += e * e;
            }
        }
        s.sqrt()
    }
}

/// Exact iterated integral of a piecewise-linear pair over grid times [s, t].
pub fn iterated_integral_pl(
    path1: &SampledPath,
    path2: &SampledPath,
    s: f64,
    t: f64,
) -> Result<Tensor2> {
    path1.check_same_grid(path2)?;
    let i = path1.index_of_time(s)?;
    let j = path1.index_of_time(t)?;
    if i > j {
        return Err(Error::InvalidParameter(format!(
            "iterated_integral_pl needs s <= t, got ({s}, {t})"
        )));
    }
    // Direct windowed accumulation; cheaper than a full prefix for one pair.
    let d = path1.dim();
    let mut acc = Tensor2::zeros(d);
    for k in i..j {
        let d1 = path1.increment(k, k + 1)?;
        let d2 = path2.increment(k, k + 1)?;
        let seg = Tensor2::outer(&d1, &d2)?;
        acc.add_assign_scaled(&seg, 0.5);
        let lead = path1.increment(i, k)?;
        let cross = Tensor2::outer(&lead, &d2)?;
        acc.add_assign(&cross);
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Trigonometric polynomial paths
// ---------------------------------------------------------------------------

/// One term a * exp(i(2 pi omega t + phi)) of a planar trigonometric path.
/// `frequency` is in cycles per unit time and may be negative.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct TrigTerm {
    pub amplitude: f64,
    pub frequency: f64,
    pub phase: f64,
}

/// Planar path sum_k a_k exp(i(2 pi omega_k t + phi_k)), embedded as
/// (x, y) = (Re, Im). Frequencies must be pairwise distinct: the analytic
/// area divides by omega_j - omega_i.
#[derive(Clone, Debug)]
pub struct TrigPath {
    terms: Vec<TrigTerm>,
}

impl TrigPath {
    pub fn new(terms: Vec<TrigTerm>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidParameter("trig path needs at least one term".into()));
        }
        for (i, a) in terms.iter().enumerate() {
            if !a.amplitude.is_finite() || !a.frequency.is_finite() || !a.phase.is_finite() {
                return Err(Error::InvalidParameter("non-finite trig term".into()));
            }
            for b in terms.iter().skip(i + 1) {
                if a.frequency == b.frequency {
                    return Err(Error::InvalidParameter(format!(
                        "coincident frequencies {} in trig path",
                        a.frequency
                    )));
                }
            }
        }
        Ok(TrigPath { terms })
    }

    pub fn terms(&self) -> &[TrigTerm] {
        &self.terms
    }

    pub fn eval(&self, t: f64) -> [f64; 2] {
        let mut x = 0.0;
        let mut y = 0.0;
        for term in &self.terms {
            let th = TAU * term.frequency * t + term.phase;
            x += term.amplitude * th.cos();
            y += term.amplitude * th.sin();
        }
        [x, y]
    }

    pub fn sample(&self, times: Vec<f64>) -> Result<SampledPath> {
        SampledPath::from_fn(times, 2, |t| self.eval(t).to_vec())
    }

    /// Exact Lévy area over [s, t] by analytic integration.
    ///
    /// The (1,2) entry is
    ///
    /// ```text
    /// pi sum_k a_k^2 omega_k (t-s)                        (linear drift)
    /// - 1/2 sum_k a_k^2 sin(2 pi omega_k (t-s))           (diagonal remainder)
    /// + 1/2 sum_{i<j} a_i a_j [ (w_i+w_j)/(w_j-w_i) (S_ij(t) - S_ij(s))
    ///       + sin(th_i(s) - th_j(t)) + sin(th_j(s) - th_i(t)) ]
    /// ```
    ///
    /// with th_k(u) = 2 pi omega_k u + phi_k and
    /// S_ij(u) = sin(2 pi (omega_j - omega_i) u + phi_j - phi_i).
    pub fn area(&self, s: f64, t: f64) -> Result<Tensor2> {
        if s > t {
            return Err(Error::InvalidParameter(format!(
                "trig area needs s <= t, got ({s}, {t})"
            )));
        }
        let mut a12 = 0.0;
        if s != t {
            let dt = t - s;
            for term in &self.terms {
                let a2 = term.amplitude * term.amplitude;
                a12 += std::f64::consts::PI * a2 * term.frequency * dt;
                a12 -= 0.5 * a2 * (TAU * term.frequency * dt).sin();
            }
            let theta = |k: &TrigTerm, u: f64| TAU * k.frequency * u + k.phase;
            for i in 0..self.terms.len() {
                for j in (i + 1)..self.terms.len() {
                    let ti = self.terms[i];
                    let tj = self.terms[j];
                    let dw = tj.frequency - ti.frequency;
                    let coeff = (ti.frequency + tj.frequency) / dw;
                    let sij = |u: f64| (TAU * dw * u + (tj.phase - ti.phase)).sin();
                    let cross = coeff * (sij(t) - sij(s))
                        + (theta(&ti, s) - theta(&tj, t)).sin()
                        + (theta(&tj, s) - theta(&ti, t)).sin();
                    a12 += 0.5 * ti.amplitude * tj.amplitude * cross;
                }
            }
        }
        let mut m = Tensor2::zeros(2);
        m.set(0, 1, a12);
        m.set(1, 0, -a12);
        Ok(m)
    }
}

/// Exact Lévy area of a trigonometric path; see [`TrigPath::area`].
pub fn trig_area(spec: &TrigPath, s: f64, t: f64) -> Result<Tensor2> {
    spec.area(s, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::path::uniform_times;

    fn triangle_loop() -> SampledPath {
        SampledPath::from_points(
            vec![0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0],
            &[
                vec![0.0, 0.0],
                vec![1.0, 0.0],
                vec![0.0, 1.0],
                vec![0.0, 0.0],
            ],
        )
        .unwrap()
    }

    /// Shoelace signed area of the closed polygon through the samples;
    /// oracle for the Lévy area of a loop.
    fn shoelace(path: &SampledPath) -> f64 {
        let n = path.len();
        let mut s = 0.0;
        for i in 0..n {
            let a = path.value(i);
            let b = path.value((i + 1) % n);
            s += a[0] * b[1] - b[0] * a[1];
        }
        s / 2.0
    }

    fn rand_path(seed: u64, n: usize, d: usize) -> SampledPath {
        let mut state = seed | 1;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let times = uniform_times(n, 1.0);
        let vals: Vec<Vec<f64>> = (0..n).map(|_| (0..d).map(|_| next()).collect()).collect();
        SampledPath::from_points(times, &vals).unwrap()
    }

    #[test]
    fn triangle_area_matches_shoelace() {
        let p = triangle_loop();
        let a = area_pl(&p, 0.0, 1.0).unwrap();
        assert!((a.get(0, 1) - 0.5).abs() < 1e-15);
        assert!((a.get(0, 1) - shoelace(&p)).abs() < 1e-15);
    }

    #[test]
    fn chord_area_zero() {
        let p = SampledPath::from_fn(uniform_times(50, 1.0), 2, |t| vec![3.0 * t, -t]).unwrap();
        for (i, j) in [(0, 49), (0, 25), (12, 37)] {
            let a = area_pl(&p, p.time(i), p.time(j)).unwrap();
            assert!(a.max_abs() < 1e-14, "window ({i}, {j})");
        }
    }

    #[test]
    fn area_antisymmetric_exactly() {
        let p = rand_path(7, 60, 3);
        let a = area_pl(&p, p.time(5), p.time(50)).unwrap();
        let sum = a.add(&a.transpose()).unwrap();
        assert_eq!(sum.max_abs(), 0.0);
    }

    #[test]
    fn circle_family_closed_form() {
        // r_n(t) = (cos nt, sin nt)/sqrt(n) on [0, 2 pi]:
        // 2 A(s, t) = (t - s) - sin(n (t - s))/n.
        let n_winding = 8u32;
        let samples = 10_000;
        let times = uniform_times(samples, std::f64::consts::TAU);
        let p = SampledPath::from_fn(times, 2, |t| {
            let nf = n_winding as f64;
            vec![
                (nf * t).cos() / nf.sqrt(),
                (nf * t).sin() / nf.sqrt(),
            ]
        })
        .unwrap();
        let pre = AreaPrefix::new(&p);
        for (i, j) in [(0, samples - 1), (1111, 7777), (2500, 5000)] {
            let (s, t) = (p.time(i), p.time(j));
            let a = pre.eval_idx(i, j).unwrap();
            let nf = n_winding as f64;
            let expect = (t - s) - (nf * (t - s)).sin() / nf;
            assert!(
                (2.0 * a.get(0, 1) - expect).abs() < 1e-3,
                "window ({s:.3}, {t:.3})"
            );
        }
    }

    #[test]
    fn iterated_integral_linear_case() {
        let v = [3.0, -1.0];
        let p = SampledPath::from_fn(uniform_times(2, 1.0), 2, |t| {
            vec![v[0] * t, v[1] * t]
        })
        .unwrap();
        let i = iterated_integral_pl(&p, &p, 0.0, 1.0).unwrap();
        let expect = Tensor2::outer(&v, &v).unwrap().scale(0.5);
        assert!(i.sub(&expect).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn iterated_integral_of_time_squared_half() {
        let p = SampledPath::from_fn(uniform_times(100, 1.0), 1, |t| vec![t]).unwrap();
        let i = iterated_integral_pl(&p, &p, 0.0, 1.0).unwrap();
        assert!((i.get(0, 0) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn antisymmetric_part_of_iterated_is_area() {
        for seed in 1..6u64 {
            let p = rand_path(seed, 40, 2);
            let i = iterated_integral_pl(&p, &p, 0.0, 1.0).unwrap();
            let a = area_pl(&p, 0.0, 1.0).unwrap();
            assert!(i.antisymmetric_part().sub(&a).unwrap().max_abs() < 1e-12);
        }
    }

    #[test]
    fn prefix_matches_direct_iterated_integral() {
        let p1 = rand_path(11, 35, 2);
        let p2 = rand_path(13, 35, 2);
        let pre = IteratedPrefix::new(&p1, &p2).unwrap();
        for (i, j) in [(0, 34), (3, 20), (17, 17), (5, 6)] {
            let a = pre.eval_idx(i, j).unwrap();
            let b = iterated_integral_pl(&p1, &p2, p1.time(i), p1.time(j)).unwrap();
            assert!(a.sub(&b).unwrap().max_abs() < 1e-13);
        }
    }

    #[test]
    fn bracket_sum_constant_path_zero() {
        let p = SampledPath::from_fn(uniform_times(10, 1.0), 2, |_| vec![2.0, -1.0]).unwrap();
        let d = Partition::full(&p);
        assert_eq!(riemann_bracket_sum(&p, &d).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn bracket_sum_rearranges_to_area() {
        // 2 A(gamma^D)(0, T) = sum [gamma_k, gamma_{k+1}] - [gamma(0), gamma(T)]
        let p = rand_path(21, 50, 2);
        let d = Partition::new(vec![0, 7, 19, 30, 49], &p).unwrap();
        let restricted = p.restrict(&d).unwrap();
        let a = area_pl(&restricted, 0.0, restricted.duration()).unwrap();
        let bsum = riemann_bracket_sum(&p, &d).unwrap();
        let corr = lie_bracket(p.value(0), p.value(49)).unwrap();
        let rhs = bsum.sub(&corr).unwrap();
        assert!(a.scale(2.0).sub(&rhs).unwrap().max_abs() < 1e-13);
    }

    #[test]
    fn riemann_sum_identity() {
        // sum 1/2 (g_k + g_{k+1}) (x) (g_{k+1} - g_k)
        //   = A(gamma^D)(0,T) + 1/2 (g(T) + g(0)) (x) (g(T) - g(0))
        for seed in 31..36u64 {
            let p = rand_path(seed, 30, 2);
            let d = Partition::new(vec![0, 2, 11, 12, 20, 29], &p).unwrap();
            let mut lhs = Tensor2::zeros(2);
            for w in d.indices().windows(2) {
                let mid: Vec<f64> = p
                    .value(w[0])
                    .iter()
                    .zip(p.value(w[1]))
                    .map(|(a, b)| 0.5 * (a + b))
                    .collect();
                let inc = p.increment(w[0], w[1]).unwrap();
                lhs.add_assign(&Tensor2::outer(&mid, &inc).unwrap());
            }
            let restricted = p.restrict(&d).unwrap();
            let a = area_pl(&restricted, 0.0, restricted.duration()).unwrap();
            let sum: Vec<f64> = p
                .value(0)
                .iter()
                .zip(p.value(29))
                .map(|(a, b)| a + b)
                .collect();
            let inc = p.increment(0, 29).unwrap();
            let rhs = a.add(&Tensor2::outer(&sum, &inc).unwrap().scale(0.5)).unwrap();
            assert!(lhs.sub(&rhs).unwrap().max_abs() < 1e-12);
        }
    }

    #[test]
    fn chen_defect_of_area_vanishes() {
        let p = rand_path(5, 80, 2);
        let pre = AreaPrefix::new(&p);
        let alpha = |s: f64, t: f64| {
            let i = p.index_of_time(s).unwrap();
            let j = p.index_of_time(t).unwrap();
            pre.eval_idx(i, j).unwrap()
        };
        for (i, k, j) in [(0, 40, 79), (3, 10, 60), (25, 25, 30)] {
            let d = chen_defect(alpha, &p, p.time(i), p.time(k), p.time(j)).unwrap();
            assert!(d <= 1e-12, "triple ({i}, {k}, {j}): {d}");
        }
    }

    #[test]
    fn chen_defect_detects_planted_violation() {
        let p = SampledPath::from_fn(uniform_times(5, 1.0), 2, |_| vec![0.0, 0.0]).unwrap();
        // additive alpha with zero path: defect 0
        let additive = |s: f64, t: f64| {
            let mut m = Tensor2::zeros(2);
            m.set(0, 1, t - s);
            m.set(1, 0, -(t - s));
            m
        };
        let d0 = chen_defect(additive, &p, 0.0, 0.5, 1.0).unwrap();
        assert!(d0 < 1e-15);
        // perturb one pair by +1
        let planted = |s: f64, t: f64| {
            let mut m = additive(s, t);
            if s == 0.0 && t == 1.0 {
                m.set(0, 1, m.get(0, 1) + 1.0);
            }
            m
        };
        let d1 = chen_defect(planted, &p, 0.0, 0.5, 1.0).unwrap();
        assert!((d1 - 1.0).abs() < 1e-12); // +1 lands in the (0,1) entry only
    }

    #[test]
    fn trig_single_term_against_dense_sampling() {
        let spec = TrigPath::new(vec![TrigTerm {
            amplitude: 0.8,
            frequency: 3.0,
            phase: 0.4,
        }])
        .unwrap();
        let n = 100_000;
        let sampled = spec.sample(uniform_times(n, 1.0)).unwrap();
        let pre = AreaPrefix::new(&sampled);
        for (i, j) in [(0, n - 1), (12_345, 90_000), (0, 33_333)] {
            let (s, t) = (sampled.time(i), sampled.time(j));
            let exact = spec.area(s, t).unwrap();
            let approx = pre.eval_idx(i, j).unwrap();
            assert!(
                exact.sub(&approx).unwrap().max_abs() < 1e-6,
                "window ({s}, {t})"
            );
        }
        // also check the printed closed form for 2A
        let a = spec.area(0.2, 0.7).unwrap();
        let (amp, om, dt) = (0.8f64, 3.0f64, 0.5f64);
        let expect = std::f64::consts::TAU * amp * amp * om * dt - amp * amp * (TAU * om * dt).sin();
        assert!((2.0 * a.get(0, 1) - expect).abs() < 1e-12);
    }

    #[test]
    fn trig_area_zero_at_equal_times() {
        let spec = TrigPath::new(vec![
            TrigTerm { amplitude: 1.0, frequency: 2.0, phase: 0.0 },
            TrigTerm { amplitude: 0.3, frequency: 5.0, phase: 1.0 },
        ])
        .unwrap();
        assert_eq!(spec.area(0.37, 0.37).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn trig_rejects_coincident_frequencies() {
        let r = TrigPath::new(vec![
            TrigTerm { amplitude: 1.0, frequency: 2.0, phase: 0.0 },
            TrigTerm { amplitude: 0.5, frequency: 2.0, phase: 0.7 },
        ]);
        assert!(r.is_err());
    }

    #[test]
    fn area_scaling_quadratic() {
        let p = rand_path(41, 25, 2);
        let scaled = p.scale_values(3.0);
        let a1 = area_pl(&p, 0.0, 1.0).unwrap();
        let a9 = area_pl(&scaled, 0.0, 1.0).unwrap();
        assert!(a9.sub(&a1.scale(9.0)).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn area_bilinear_under_path_addition() {
        // A(g1 + g2) = sum_{i,j} antisym(I(g_i, g_j))
        for seed in 51..54u64 {
            let p1 = rand_path(seed, 30, 2);
            let p2 = rand_path(seed + 100, 30, 2);
            let sum = p1.add(&p2).unwrap();
            let total = area_pl(&sum, 0.0, 1.0).unwrap();
            let mut acc = Tensor2::zeros(2);
            for (a, b) in [(&p1, &p1), (&p1, &p2), (&p2, &p1), (&p2, &p2)] {
                let i = iterated_integral_pl(a, b, 0.0, 1.0).unwrap();
                acc.add_assign(&i.antisymmetric_part());
            }
            assert!(total.sub(&acc).unwrap().max_abs() < 1e-12);
        }
    }
}
