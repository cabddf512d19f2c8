//! Generators and closed-form analytics for lacunary trigonometric paths:
//! block index construction, the alternating-block and single-block series,
//! the modulus-driven pair, and the dyadic Riemann bracket sums that are
//! computable without materializing 4^N-point grids.
//!
//! Conventions: frequencies are 4^k cycles on [0, 1]; the dyadic partition
//! at level N has 4^N pieces. On that grid every term with k >= N aliases to
//! a constant, which is why the bracket sums close at k = N - 1.

use std::f64::consts::{PI, TAU};

use crate::area::{TrigPath, TrigTerm};
use crate::error::{Error, Result};
use crate::path::SampledPath;
use crate::young::Modulus;

/// Block construction refuses indices beyond this bound.
pub const DESK_L_MAX: u64 = 10_000_000;

/// m(4^-k) without underflow (4^-k reaches subnormals near k = 512).
pub fn modulus_at_dyadic(m: &Modulus, k: u64) -> f64 {
    m.eval_log(k as f64 * 4f64.ln())
}

// ---------------------------------------------------------------------------
// Block indices
// ---------------------------------------------------------------------------

/// Which defining condition a block sequence satisfies.
#[derive(Clone, Debug, PartialEq)]
pub enum BlockRule {
    /// c^n <= sum_{k in block n} 1/k <= c^n + 1, c > pi
    Harmonic { c: f64 },
    /// sum_{k in block n} 1/k >= 1
    HarmonicUnit,
    /// c^n <= sum_{k in block n} w(k) <= c^n + 1 for a caller-provided weight
    Weighted { c: f64 },
}

/// Strictly increasing block boundaries l_1 < l_2 < ... (block n is
/// {l_n, ..., l_{n+1} - 1}) together with the per-block weight sums.
#[derive(Clone, Debug)]
pub struct BlockIndex {
    boundaries: Vec<u64>,
    rule: BlockRule,
    block_sums: Vec<f64>,
}

fn greedy_blocks(
    weight: impl Fn(u64) -> f64,
    target: impl Fn(usize) -> f64,
    l1: u64,
    count: usize,
    rule: BlockRule,
) -> Result<BlockIndex> {
    if l1 < 1 {
        return Err(Error::InvalidParameter("l1 must be >= 1".into()));
    }
    if count == 0 {
        return Err(Error::InvalidParameter("need at least one block".into()));
    }
    let mut boundaries = vec![l1];
    let mut block_sums = Vec::with_capacity(count);
    let mut k = l1;
    for n in 1..=count {
        let goal = target(n);
        let mut sum = 0.0;
        while sum < goal {
            if k > DESK_L_MAX {
                return Err(Error::BlocksInfeasible {
                    block: n,
                    cap: DESK_L_MAX,
                });
            }
            let w = weight(k);
            if !(w > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "block weight at k = {k} is not positive"
                )));
            }
            sum += w;
            k += 1;
        }
        if sum > goal + 1.0 {
            return Err(Error::Inconsistency(format!(
                "block {n} overshot: sum {sum} > target {goal} + 1"
            )));
        }
        boundaries.push(k);
        block_sums.push(sum);
    }
    Ok(BlockIndex {
        boundaries,
        rule,
        block_sums,
    })
}

/// Alternating-sign multi-block condition: c^n <= sum 1/k <= c^n + 1.
/// Harmonic weights need l1 >= 2 so single increments stay below 1.
pub fn harmonic_blocks(c: f64, l1: u64, count: usize) -> Result<BlockIndex> {
    if !(c > PI) {
        return Err(Error::InvalidParameter(format!(
            "harmonic blocks require c > pi, got {c}"
        )));
    }
    if l1 < 2 {
        return Err(Error::InvalidParameter(format!("l1 must be >= 2, got {l1}")));
    }
    greedy_blocks(
        |k| 1.0 / k as f64,
        |n| c.powi(n as i32),
        l1,
        count,
        BlockRule::Harmonic { c },
    )
}

/// Unit-mass blocks: sum 1/k >= 1 per block.
pub fn unit_blocks(l1: u64, count: usize) -> Result<BlockIndex> {
    if l1 < 2 {
        return Err(Error::InvalidParameter(format!("l1 must be >= 2, got {l1}")));
    }
    greedy_blocks(
        |k| 1.0 / k as f64,
        |_| 1.0,
        l1,
        count,
        BlockRule::HarmonicUnit,
    )
}

/// Blocks accumulated against an arbitrary positive weight (used with
/// modulus-driven weights w(k) = m1(4^-k) m2(4^-k)).
pub fn weighted_blocks(
    weight: impl Fn(u64) -> f64,
    c: f64,
    l1: u64,
    count: usize,
) -> Result<BlockIndex> {
    if !(c > PI) {
        return Err(Error::InvalidParameter(format!(
            "weighted blocks require c > pi, got {c}"
        )));
    }
    greedy_blocks(weight, |n| c.powi(n as i32), l1, count, BlockRule::Weighted { c })
}

impl BlockIndex {
    pub fn boundaries(&self) -> &[u64] {
        &self.boundaries
    }

    pub fn rule(&self) -> &BlockRule {
        &self.rule
    }

    pub fn count(&self) -> usize {
        self.boundaries.len() - 1
    }

    /// 1-based boundary l_j.
    pub fn boundary(&self, j: usize) -> Result<u64> {
        self.boundaries
            .get(j - 1)
            .copied()
            .ok_or_else(|| Error::IndexOutOfRange(format!("boundary l_{j}")))
    }

    /// Weight sum over block j (1-based).
    pub fn block_weight_sum(&self, j: usize) -> Result<f64> {
        self.block_sums
            .get(j - 1)
            .copied()
            .ok_or_else(|| Error::IndexOutOfRange(format!("block {j}")))
    }

    /// 1-based block containing k, if covered.
    pub fn block_of(&self, k: u64) -> Option<usize> {
        if k < self.boundaries[0] || k >= *self.boundaries.last().unwrap() {
            return None;
        }
        let j = self.boundaries.partition_point(|&b| b <= k);
        Some(j)
    }

    /// First index not covered by any block.
    pub fn coverage_end(&self) -> u64 {
        *self.boundaries.last().unwrap()
    }
}

// ---------------------------------------------------------------------------
// Sign schedules
// ---------------------------------------------------------------------------

/// Per-k sign schedule epsilon_k in {+1, -1}, stored explicitly so the
/// alternating-block and custom schedules share one code path.
#[derive(Clone, Debug)]
pub struct SignSchedule {
    k_lo: u64,
    signs: Vec<i8>,
}

impl SignSchedule {
    pub fn all_plus(k_lo: u64, k_hi: u64) -> Result<SignSchedule> {
        if k_hi < k_lo {
            return Err(Error::InvalidParameter("empty sign schedule".into()));
        }
        Ok(SignSchedule {
            k_lo,
            signs: vec![1; (k_hi - k_lo + 1) as usize],
        })
    }

    /// epsilon_k = (-1)^n on block n of the given block index.
    pub fn alternating(blocks: &BlockIndex) -> SignSchedule {
        let k_lo = blocks.boundaries()[0];
        let k_hi = blocks.coverage_end() - 1;
        let signs = (k_lo..=k_hi)
            .map(|k| {
                let n = blocks.block_of(k).expect("covered");
                if n.is_multiple_of(2) {
                    1i8
                } else {
                    -1i8
                }
            })
            .collect();
        SignSchedule { k_lo, signs }
    }

    /// Alternating signs over explicit boundaries: sign (-1)^n on
    /// [b_n, b_{n+1}), n = 1-based.
    pub fn alternating_boundaries(boundaries: &[u64]) -> Result<SignSchedule> {
        if boundaries.len() < 2 || boundaries.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter("bad sign boundaries".into()));
        }
        let k_lo = boundaries[0];
        let k_hi = *boundaries.last().unwrap() - 1;
        let mut signs = Vec::with_capacity((k_hi - k_lo + 1) as usize);
        for k in k_lo..=k_hi {
            let n = boundaries.partition_point(|&b| b <= k);
            signs.push(if n % 2 == 0 { 1i8 } else { -1i8 });
        }
        Ok(SignSchedule { k_lo, signs })
    }

    pub fn explicit(k_lo: u64, signs: Vec<i8>) -> Result<SignSchedule> {
        if signs.is_empty() || signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidParameter("signs must be +1/-1".into()));
        }
        Ok(SignSchedule { k_lo, signs })
    }

    pub fn k_lo(&self) -> u64 {
        self.k_lo
    }

    pub fn k_hi(&self) -> u64 {
        self.k_lo + self.signs.len() as u64 - 1
    }

    pub fn at(&self, k: u64) -> Result<f64> {
        if k < self.k_lo || k > self.k_hi() {
            return Err(Error::IndexOutOfRange(format!(
                "sign schedule covers [{}, {}], asked for {k}",
                self.k_lo,
                self.k_hi()
            )));
        }
        Ok(self.signs[(k - self.k_lo) as usize] as f64)
    }
}

// ---------------------------------------------------------------------------
// Lacunary series
// ---------------------------------------------------------------------------

/// Coefficient law a_k of the series.
#[derive(Clone, Debug)]
pub enum CoeffLaw {
    /// a_k = k^(-1/2) 2^(-k), optionally normalized per block by
    /// (pi * sum_{block} 1/k)^(-1/2).
    SqrtGeometric { normalized: bool },
    /// a_k = m(4^-k) 2^(-2k/p).
    ModulusDriven { m: Modulus, p: f64 },
}

/// Planar lacunary series sum_k a_k (cos(2 pi 4^k t), eps_k sin(2 pi 4^k t))
/// over a covered index range, materialized up to a truncation index.
#[derive(Clone, Debug)]
pub struct LacunarySeries {
    blocks: BlockIndex,
    signs: SignSchedule,
    law: CoeffLaw,
    k_lo: u64,
    /// last index of the covered range
    k_hi: u64,
    /// materialization / closed-form cutoff (inclusive, <= k_hi)
    truncation: u64,
    /// true when the series genuinely has no terms beyond the cutoff
    /// (single blocks, deliberate truncations); false when it stands for an
    /// ideal series continuing past the covered blocks
    complete: bool,
}

impl LacunarySeries {
    /// The alternating-sign multi-block series over all covered blocks.
    /// `truncation = None` means "whole covered range".
    pub fn alternating(blocks: BlockIndex, truncation: Option<u64>) -> Result<LacunarySeries> {
        let signs = SignSchedule::alternating(&blocks);
        Self::build(
            blocks,
            signs,
            CoeffLaw::SqrtGeometric { normalized: false },
            truncation,
        )
    }

    /// Single block n (1-based), unit signs; `normalized` applies the
    /// (pi * sum 1/k)^(-1/2) per-block factor.
    pub fn single_block(
        blocks: &BlockIndex,
        n: usize,
        normalized: bool,
    ) -> Result<LacunarySeries> {
        let lo = blocks.boundary(n)?;
        let hi = blocks.boundary(n + 1)? - 1;
        let sum = blocks.block_weight_sum(n)?;
        // the extracted block keeps its weight sum but not the c^n ladder
        let sub = BlockIndex {
            boundaries: vec![lo, hi + 1],
            rule: BlockRule::HarmonicUnit,
            block_sums: vec![sum],
        };
        let signs = SignSchedule::all_plus(lo, hi)?;
        let mut s = Self::build(
            sub,
            signs,
            CoeffLaw::SqrtGeometric { normalized },
            None,
        )?;
        s.complete = true;
        Ok(s)
    }

    pub fn with_law(
        blocks: BlockIndex,
        signs: SignSchedule,
        law: CoeffLaw,
        truncation: Option<u64>,
    ) -> Result<LacunarySeries> {
        Self::build(blocks, signs, law, truncation)
    }

    fn build(
        blocks: BlockIndex,
        signs: SignSchedule,
        law: CoeffLaw,
        truncation: Option<u64>,
    ) -> Result<LacunarySeries> {
        let k_lo = blocks.boundaries()[0];
        let k_hi = blocks.coverage_end() - 1;
        if signs.k_lo() > k_lo || signs.k_hi() < k_hi {
            return Err(Error::InvalidParameter(
                "sign schedule does not cover the block range".into(),
            ));
        }
        let (truncation, complete) = match truncation {
            None => (k_hi, false),
            Some(t) => {
                if t < k_lo || t > k_hi {
                    return Err(Error::InvalidParameter(format!(
                        "truncation {t} outside covered range [{k_lo}, {k_hi}]"
                    )));
                }
                (t, true)
            }
        };
        if let CoeffLaw::ModulusDriven { p, .. } = &law {
            if !(*p > 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "modulus-driven law requires p > 1, got {p}"
                )));
            }
        }
        Ok(LacunarySeries {
            blocks,
            signs,
            law,
            k_lo,
            k_hi,
            truncation,
            complete,
        })
    }

    pub fn blocks(&self) -> &BlockIndex {
        &self.blocks
    }

    pub fn truncation(&self) -> u64 {
        self.truncation
    }

    pub fn coefficient(&self, k: u64) -> Result<f64> {
        if k < self.k_lo || k > self.k_hi {
            return Err(Error::IndexOutOfRange(format!(
                "coefficient index {k} outside [{}, {}]",
                self.k_lo, self.k_hi
            )));
        }
        Ok(match &self.law {
            CoeffLaw::SqrtGeometric { normalized } => {
                let base = (k as f64).powf(-0.5) * 2f64.powi(-(k as i32));
                if *normalized {
                    let j = self.blocks.block_of(k).expect("covered");
                    let s = self.blocks.block_weight_sum(j)?;
                    base * (PI * s).powf(-0.5)
                } else {
                    base
                }
            }
            CoeffLaw::ModulusDriven { m, p } => {
                modulus_at_dyadic(m, k) * 2f64.powf(-2.0 * k as f64 / p)
            }
        })
    }

    /// a_k^2 4^k, the quantity entering every dyadic bracket sum; stable for
    /// large k.
    fn coeff_sq_4k(&self, k: u64) -> Result<f64> {
        Ok(match &self.law {
            CoeffLaw::SqrtGeometric { normalized } => {
                let base = 1.0 / k as f64;
                if *normalized {
                    let j = self.blocks.block_of(k).expect("covered");
                    let s = self.blocks.block_weight_sum(j)?;
                    base / (PI * s)
                } else {
                    base
                }
            }
            CoeffLaw::ModulusDriven { m, p } => {
                let mv = modulus_at_dyadic(m, k);
                mv * mv * 4f64.powf(k as f64 * (1.0 - 2.0 / p))
            }
        })
    }

    pub fn sign(&self, k: u64) -> Result<f64> {
        self.signs.at(k)
    }

    /// Truncated series value (Re, Im).
    pub fn eval(&self, t: f64) -> [f64; 2] {
        let mut x = 0.0;
        let mut y = 0.0;
        for k in self.k_lo..=self.truncation {
            let a = self.coefficient(k).expect("in range");
            let th = TAU * 4f64.powi(k as i32) * t;
            x += a * th.cos();
            y += self.signs.at(k).expect("covered") * a * th.sin();
        }
        [x, y]
    }

    pub fn sample(&self, times: Vec<f64>) -> Result<SampledPath> {
        SampledPath::from_fn(times, 2, |t| self.eval(t).to_vec())
    }

    /// The truncated series as a trigonometric path (signed frequencies
    /// eps_k 4^k), enabling the analytic area.
    pub fn to_trig_path(&self) -> Result<TrigPath> {
        let mut terms = Vec::new();
        for k in self.k_lo..=self.truncation {
            terms.push(TrigTerm {
                amplitude: self.coefficient(k)?,
                frequency: self.signs.at(k)? * 4f64.powi(k as i32),
                phase: 0.0,
            });
        }
        TrigPath::new(terms)
    }

    /// Sum of |a_k| beyond the truncation within coverage, plus the
    /// geometric bound for the ideal tail beyond coverage.
    pub fn truncation_tail(&self) -> f64 {
        let mut tail = 0.0;
        for k in (self.truncation + 1)..=self.k_hi {
            tail += self.coefficient(k).expect("in range");
        }
        if let CoeffLaw::SqrtGeometric { .. } = self.law {
            // sum_{k > k_hi} k^(-1/2) 2^-k <= (k_hi + 1)^(-1/2) 2^(-k_hi)
            tail += ((self.k_hi + 1) as f64).powf(-0.5) * 2f64.powi(-(self.k_hi as i32));
        }
        tail
    }

    /// Closed form of the dyadic Riemann bracket sum at level n:
    /// sum over k of eps_k a_k^2 4^n sin(2 pi 4^(k-n)), the value of
    /// sum_l x(t_l) y(t_{l+1}) - y(t_l) x(t_{l+1}) on the 4^n-piece grid.
    /// Terms with k >= n alias to constants and drop out.
    pub fn bracket_sum_closed(&self, n: u64) -> Result<f64> {
        if n < self.k_lo + 1 {
            return Err(Error::InvalidParameter(format!(
                "bracket sum needs n >= l1 + 1 = {}, got {n}",
                self.k_lo + 1
            )));
        }
        let k_end = (n - 1).min(self.truncation);
        if !self.complete && n - 1 > self.k_hi {
            return Err(Error::BlocksInfeasible {
                block: self.blocks.count() + 1,
                cap: DESK_L_MAX,
            });
        }
        let mut sum = 0.0;
        let mut comp = 0.0; // Kahan compensation
        for k in self.k_lo..=k_end {
            let term = self.sign(k)? * self.coeff_sq_4k(k)? * sin_factor(k, n);
            let y = term - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        Ok(sum)
    }

    /// Block partial sum s_j^n = sum_{k in block j} a_k^2 4^n sin(2 pi 4^(k-n))
    /// (unsigned). For harmonic blocks the two-sided bound
    /// 4 c^j <= s <= 2 pi (c^j + 1) is asserted.
    pub fn block_sum(&self, j: usize, n: u64) -> Result<f64> {
        let lo = self.blocks.boundary(j)?;
        let hi = self.blocks.boundary(j + 1)? - 1;
        if n < hi + 1 {
            return Err(Error::InvalidParameter(format!(
                "block sum s_{j}^{n} needs n >= l_{} = {}",
                j + 1,
                hi + 1
            )));
        }
        let mut sum = 0.0;
        let mut comp = 0.0;
        for k in lo..=hi {
            let term = self.coeff_sq_4k(k)? * sin_factor(k, n);
            let y = term - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        if sum <= 0.0 {
            return Err(Error::Inconsistency(format!("block sum s_{j}^{n} = {sum} <= 0")));
        }
        if let BlockRule::Harmonic { c } = self.blocks.rule() {
            let lower = 4.0 * c.powi(j as i32);
            let upper = 2.0 * PI * (c.powi(j as i32) + 1.0);
            if sum < lower * (1.0 - 1e-12) || sum > upper * (1.0 + 1e-12) {
                return Err(Error::Inconsistency(format!(
                    "block sum s_{j}^{n} = {sum} outside [{lower}, {upper}]"
                )));
            }
        }
        Ok(sum)
    }
}

/// sin(2 pi 4^(k-n)) / 4^(k-n), the per-term factor of every dyadic bracket
/// sum; tends to 2 pi as n - k grows, and the switch at n - k = 16 is
/// below f64 resolution.
#[inline]
fn sin_factor(k: u64, n: u64) -> f64 {
    let gap = n - k;
    if gap >= 16 {
        TAU
    } else {
        let x = 0.25f64.powi(gap as i32);
        (TAU * x).sin() / x
    }
}

// ---------------------------------------------------------------------------
// Modulus-driven real pair
// ---------------------------------------------------------------------------

/// The real-valued pair
///   gamma1(t) = sum m1(4^-k) 2^(-2k/p) cos(2 pi 4^k t),
///   gamma2(t) = sum eps_k m2(4^-k) 2^(-2k/q) sin(2 pi 4^k t),
/// with 1/p + 1/q = 1, truncated at K.
#[derive(Clone, Debug)]
pub struct NecessityPair {
    m1: Modulus,
    m2: Modulus,
    p: f64,
    q: f64,
    signs: SignSchedule,
    truncation: u64,
}

impl NecessityPair {
    pub fn new(
        m1: Modulus,
        m2: Modulus,
        p: f64,
        signs: SignSchedule,
        truncation: u64,
    ) -> Result<NecessityPair> {
        if !(p > 1.0) {
            return Err(Error::InvalidParameter(format!("requires p > 1, got {p}")));
        }
        if truncation < 1 {
            return Err(Error::InvalidParameter("truncation must be >= 1".into()));
        }
        if signs.k_lo() > 1 || signs.k_hi() < truncation {
            return Err(Error::InvalidParameter(
                "sign schedule must cover 1..=truncation".into(),
            ));
        }
        let q = 1.0 / (1.0 - 1.0 / p);
        Ok(NecessityPair {
            m1,
            m2,
            p,
            q,
            signs,
            truncation,
        })
    }

    pub fn eval1(&self, t: f64) -> f64 {
        let mut x = 0.0;
        for k in 1..=self.truncation {
            let a = modulus_at_dyadic(&self.m1, k) * 2f64.powf(-2.0 * k as f64 / self.p);
            x += a * (TAU * 4f64.powi(k as i32) * t).cos();
        }
        x
    }

    pub fn eval2(&self, t: f64) -> f64 {
        let mut y = 0.0;
        for k in 1..=self.truncation {
            let a = modulus_at_dyadic(&self.m2, k) * 2f64.powf(-2.0 * k as f64 / self.q);
            y += self.signs.at(k).expect("covered") * a * (TAU * 4f64.powi(k as i32) * t).sin();
        }
        y
    }

    pub fn sample1(&self, times: Vec<f64>) -> Result<SampledPath> {
        SampledPath::from_fn(times, 1, |t| vec![self.eval1(t)])
    }

    pub fn sample2(&self, times: Vec<f64>) -> Result<SampledPath> {
        SampledPath::from_fn(times, 1, |t| vec![self.eval2(t)])
    }

    /// Closed form of sum_l gamma1(t_l) gamma2(t_{l+1}) - gamma2(t_l) gamma1(t_{l+1})
    /// on the 4^n-piece dyadic grid:
    /// sum_{k <= min(n-1, K)} eps_k m1(4^-k) m2(4^-k) sin(2 pi 4^(k-n)) / 4^(k-n).
    /// The conjugacy 1/p + 1/q = 1 cancels the amplitude scalings exactly.
    pub fn bracket_closed(&self, n: u64) -> Result<f64> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!("needs n >= 2, got {n}")));
        }
        let k_end = (n - 1).min(self.truncation);
        let mut sum = 0.0;
        let mut comp = 0.0;
        for k in 1..=k_end {
            let term = self.signs.at(k)?
                * modulus_at_dyadic(&self.m1, k)
                * modulus_at_dyadic(&self.m2, k)
                * sin_factor(k, n);
            let y = term - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        Ok(sum)
    }

    /// Limit of the truncated bracket sums as n -> infinity:
    /// 2 pi sum_{k <= K} eps_k m1(4^-k) m2(4^-k).
    pub fn bracket_limit(&self) -> f64 {
        let mut sum = 0.0;
        for k in 1..=self.truncation {
            sum += self.signs.at(k).expect("covered")
                * modulus_at_dyadic(&self.m1, k)
                * modulus_at_dyadic(&self.m2, k)
                * TAU;
        }
        sum
    }
}

// ---------------------------------------------------------------------------
// Analytic probe paths
// ---------------------------------------------------------------------------

/// (cos(n t), sin(n t)) / sqrt(n) on [0, 2 pi]: circles that shrink in sup
/// norm but carry a unit of area drift per winding.
pub fn shrinking_circle(n: u32, t: f64) -> [f64; 2] {
    let nf = n as f64;
    [(nf * t).cos() / nf.sqrt(), (nf * t).sin() / nf.sqrt()]
}

pub fn shrinking_circle_path(n: u32, samples: usize) -> Result<SampledPath> {
    if n == 0 {
        return Err(Error::InvalidParameter("winding must be >= 1".into()));
    }
    SampledPath::from_fn(
        crate::path::uniform_times(samples, std::f64::consts::TAU),
        2,
        |t| shrinking_circle(n, t).to_vec(),
    )
}

/// t^(1/2) cos^2(pi / t) / ln t on (0, e^-1], extended by 0 at t = 0: a
/// vanishing-2-variation scalar path outside every p < 2 variation class.
/// The natural formula degenerates at t = 1 (ln 1 = 0), so the domain stops
/// at e^-1.
pub fn borderline_path(t: f64) -> Result<f64> {
    let hi = (-1f64).exp();
    if t == 0.0 {
        return Ok(0.0);
    }
    if !(t > 0.0) || t > hi + 1e-15 {
        return Err(Error::InvalidParameter(format!(
            "borderline path is defined on [0, e^-1], got {t}"
        )));
    }
    Ok(t.sqrt() * (PI / t).cos().powi(2) / t.ln())
}
