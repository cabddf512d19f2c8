//! Path, partition, and order-2 tensor primitives shared by every other module.
//!
//! Paths are finite samples of a continuous path; evaluation between samples
//! is always piecewise-linear interpolation. Partitions are index subsets of
//! a sample grid containing both endpoints, never arbitrary reals.

use std::io::{BufRead, BufReader, Read, Write};

use serde::Serialize;

use crate::error::{Error, Result};

/// Absolute tolerance for time comparisons.
pub const TIME_TOL: f64 = 1e-12;

/// Largest value dimension supported. Every construction used here lives in
/// the span of two coordinates; 8 leaves headroom for embedding experiments.
pub const MAX_DIM: usize = 8;

/// Format a float with 17 significant digits (lossless f64 round-trip).
pub fn fmt_f64(x: f64) -> String {
    format!("{:.16e}", x)
}

// ---------------------------------------------------------------------------
// Tensor2
// ---------------------------------------------------------------------------

/// Dense d x d real matrix holding tensor products, areas, and Lie brackets.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Tensor2 {
    dim: usize,
    entries: Vec<f64>,
}

impl Tensor2 {
    pub fn zeros(dim: usize) -> Self {
        Tensor2 {
            dim,
            entries: vec![0.0; dim * dim],
        }
    }

    pub fn from_entries(dim: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries for a {dim}x{dim} tensor, got {}",
                dim * dim,
                entries.len()
            )));
        }
        Ok(Tensor2 { dim, entries })
    }

    /// u (x) v.
    pub fn outer(u: &[f64], v: &[f64]) -> Result<Self> {
        if u.len() != v.len() {
            return Err(Error::DimensionMismatch(format!(
                "outer product of vectors with dims {} and {}",
                u.len(),
                v.len()
            )));
        }
        let d = u.len();
        let mut entries = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..d {
                entries[i * d + j] = u[i] * v[j];
            }
        }
        Ok(Tensor2 { dim: d, entries })
    }

    /// [u, v] = u (x) v - v (x) u. Entries are formed antisymmetrically, so
    /// M^T = -M holds exactly in floating point.
    pub fn bracket(u: &[f64], v: &[f64]) -> Result<Self> {
        if u.len() != v.len() {
            return Err(Error::DimensionMismatch(format!(
                "bracket of vectors with dims {} and {}",
                u.len(),
                v.len()
            )));
        }
        let d = u.len();
        let mut m = Tensor2::zeros(d);
        for i in 0..d {
            for j in (i + 1)..d {
                let e = u[i] * v[j] - u[j] * v[i];
                m.entries[i * d + j] = e;
                m.entries[j * d + i] = -e;
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn add(&self, other: &Tensor2) -> Result<Tensor2> {
        self.check_dim(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Tensor2 {
            dim: self.dim,
            entries,
        })
    }

    pub fn sub(&self, other: &Tensor2) -> Result<Tensor2> {
        self.check_dim(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Tensor2 {
            dim: self.dim,
            entries,
        })
    }

    pub fn scale(&self, s: f64) -> Tensor2 {
        Tensor2 {
            dim: self.dim,
            entries: self.entries.iter().map(|a| a * s).collect(),
        }
    }

    pub fn add_assign(&mut self, other: &Tensor2) {
        debug_assert_eq!(self.dim, other.dim);
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            *a += b;
        }
    }

    pub fn add_assign_scaled(&mut self, other: &Tensor2, s: f64) {
        debug_assert_eq!(self.dim, other.dim);
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            *a += b * s;
        }
    }

    pub fn transpose(&self) -> Tensor2 {
        let d = self.dim;
        let mut entries = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..d {
                entries[j * d + i] = self.entries[i * d + j];
            }
        }
        Tensor2 { dim: d, entries }
    }

    /// (M - M^T)/2.
    pub fn antisymmetric_part(&self) -> Tensor2 {
        let d = self.dim;
        let mut m = Tensor2::zeros(d);
        for i in 0..d {
            for j in (i + 1)..d {
                let e = 0.5 * (self.get(i, j) - self.get(j, i));
                m.entries[i * d + j] = e;
                m.entries[j * d + i] = -e;
            }
        }
        m
    }

    /// Frobenius norm. Satisfies ||u (x) v|| = ||u|| ||v||, so the standing
    /// cross-norm assumption holds with equality.
    pub fn frobenius(&self) -> f64 {
        self.entries.iter().map(|a| a * a).sum::<f64>().sqrt()
    }

    /// Frobenius inner product <A, B>.
    pub fn inner(&self, other: &Tensor2) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, a| m.max(a.abs()))
    }

    fn check_dim(&self, other: &Tensor2) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(format!(
                "tensor dims {} and {}",
                self.dim, other.dim
            )));
        }
        Ok(())
    }
}

/// [u, v] = u (x) v - v (x) u.
pub fn lie_bracket(u: &[f64], v: &[f64]) -> Result<Tensor2> {
    Tensor2::bracket(u, v)
}

// ---------------------------------------------------------------------------
// SampledPath
// ---------------------------------------------------------------------------

/// A d-dimensional path sampled on a strictly increasing time grid starting
/// at 0. Values are stored row-major (sample-major).
#[derive(Clone, Debug)]
pub struct SampledPath {
    times: Vec<f64>,
    values: Vec<f64>,
    dim: usize,
}

impl SampledPath {
    pub fn new(times: Vec<f64>, values: Vec<f64>, dim: usize) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::InvalidPath(format!(
                "dimension {dim} outside 1..={MAX_DIM}"
            )));
        }
        if times.len() < 2 {
            return Err(Error::InvalidPath("need at least 2 samples".into()));
        }
        if values.len() != times.len() * dim {
            return Err(Error::InvalidPath(format!(
                "{} values for {} samples of dimension {dim}",
                values.len(),
                times.len()
            )));
        }
        if times[0].abs() > TIME_TOL {
            return Err(Error::InvalidPath(format!(
                "first time must be 0, got {}",
                times[0]
            )));
        }
        for w in times.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::InvalidPath(format!(
                    "times not strictly increasing at {} -> {}",
                    w[0], w[1]
                )));
            }
        }
        if values.iter().any(|v| !v.is_finite()) || times.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidPath("non-finite sample".into()));
        }
        Ok(SampledPath { times, values, dim })
    }

    pub fn from_points(times: Vec<f64>, points: &[Vec<f64>]) -> Result<Self> {
        let dim = points.first().map(|p| p.len()).unwrap_or(0);
        let mut values = Vec::with_capacity(points.len() * dim);
        for p in points {
            if p.len() != dim {
                return Err(Error::InvalidPath("ragged point list".into()));
            }
            values.extend_from_slice(p);
        }
        SampledPath::new(times, values, dim)
    }

    /// Sample a function on the given grid.
    pub fn from_fn(times: Vec<f64>, dim: usize, f: impl Fn(f64) -> Vec<f64>) -> Result<Self> {
        let mut values = Vec::with_capacity(times.len() * dim);
        for &t in &times {
            let p = f(t);
            if p.len() != dim {
                return Err(Error::InvalidPath("generator dimension mismatch".into()));
            }
            values.extend_from_slice(&p);
        }
        SampledPath::new(times, values, dim)
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn time(&self, i: usize) -> f64 {
        self.times[i]
    }

    pub fn duration(&self) -> f64 {
        *self.times.last().unwrap()
    }

    #[inline]
    pub fn value(&self, i: usize) -> &[f64] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }

    pub fn values_flat(&self) -> &[f64] {
        &self.values
    }

    /// values[j] - values[i].
    pub fn increment(&self, i: usize, j: usize) -> Result<Vec<f64>> {
        let n = self.len();
        if i >= n || j >= n {
            return Err(Error::IndexOutOfRange(format!(
                "increment({i}, {j}) on {n} samples"
            )));
        }
        if i > j {
            return Err(Error::IndexOutOfRange(format!(
                "increment requires i <= j, got ({i}, {j})"
            )));
        }
        let a = self.value(i);
        let b = self.value(j);
        Ok(b.iter().zip(a).map(|(x, y)| x - y).collect())
    }

    /// Euclidean norm of values[j] - values[i] (no allocation).
    #[inline]
    pub fn increment_norm(&self, i: usize, j: usize) -> f64 {
        let a = self.value(i);
        let b = self.value(j);
        let mut s = 0.0;
        for k in 0..self.dim {
            let d = b[k] - a[k];
            s += d * d;
        }
        s.sqrt()
    }

    /// Index of a grid time, within absolute tolerance.
    pub fn index_of_time(&self, t: f64) -> Result<usize> {
        let i = self
            .times
            .partition_point(|&x| x < t - TIME_TOL)
            .min(self.times.len() - 1);
        if (self.times[i] - t).abs() <= TIME_TOL {
            return Ok(i);
        }
        if i > 0 && (self.times[i - 1] - t).abs() <= TIME_TOL {
            return Ok(i - 1);
        }
        Err(Error::IndexOutOfRange(format!("{t} is not a grid time")))
    }

    /// Piecewise-linear evaluation at any t in [0, T].
    pub fn eval_linear(&self, t: f64) -> Result<Vec<f64>> {
        let t0 = self.times[0];
        let t1 = self.duration();
        if t < t0 - TIME_TOL || t > t1 + TIME_TOL {
            return Err(Error::IndexOutOfRange(format!(
                "{t} outside [{t0}, {t1}]"
            )));
        }
        let t = t.clamp(t0, t1);
        let j = self
            .times
            .partition_point(|&x| x <= t)
            .clamp(1, self.len() - 1);
        let (ta, tb) = (self.times[j - 1], self.times[j]);
        let lam = (t - ta) / (tb - ta);
        let a = self.value(j - 1);
        let b = self.value(j);
        Ok(a.iter()
            .zip(b)
            .map(|(x, y)| x + lam * (y - x))
            .collect())
    }

    /// The sub-sampled path that agrees with this one on the partition.
    pub fn restrict(&self, d: &Partition) -> Result<SampledPath> {
        d.validate_for(self)?;
        let mut times = Vec::with_capacity(d.len());
        let mut values = Vec::with_capacity(d.len() * self.dim);
        for &i in d.indices() {
            times.push(self.times[i]);
            values.extend_from_slice(self.value(i));
        }
        // Shift so the first time is exactly 0 (it already is: partitions
        // contain index 0).
        SampledPath::new(times, values, self.dim)
    }

    /// The piecewise-linear interpolation through the partition's points,
    /// re-sampled on the full grid. Knot values are copied exactly.
    pub fn interpolate_onto_grid(&self, d: &Partition) -> Result<SampledPath> {
        d.validate_for(self)?;
        let mut values = vec![0.0; self.values.len()];
        let idx = d.indices();
        for w in idx.windows(2) {
            let (a, b) = (w[0], w[1]);
            let (ta, tb) = (self.times[a], self.times[b]);
            let va = self.value(a).to_vec();
            let vb = self.value(b).to_vec();
            for j in a..=b {
                let out = &mut values[j * self.dim..(j + 1) * self.dim];
                if j == a {
                    out.copy_from_slice(&va);
                } else if j == b {
                    out.copy_from_slice(&vb);
                } else {
                    let lam = (self.times[j] - ta) / (tb - ta);
                    for k in 0..self.dim {
                        out[k] = va[k] + lam * (vb[k] - va[k]);
                    }
                }
            }
        }
        SampledPath::new(self.times.clone(), values, self.dim)
    }

    pub fn scale_values(&self, s: f64) -> SampledPath {
        SampledPath {
            times: self.times.clone(),
            values: self.values.iter().map(|v| v * s).collect(),
            dim: self.dim,
        }
    }

    /// Pointwise sum of two paths on the same grid.
    pub fn add(&self, other: &SampledPath) -> Result<SampledPath> {
        self.check_same_grid(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a + b)
            .collect();
        Ok(SampledPath {
            times: self.times.clone(),
            values,
            dim: self.dim,
        })
    }

    /// Pointwise difference of two paths on the same grid.
    pub fn sub(&self, other: &SampledPath) -> Result<SampledPath> {
        self.check_same_grid(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a - b)
            .collect();
        Ok(SampledPath {
            times: self.times.clone(),
            values,
            dim: self.dim,
        })
    }

    /// Affinely rescale times so the path lives on [0, 1].
    pub fn with_unit_time(&self) -> SampledPath {
        let t_end = self.duration();
        SampledPath {
            times: self.times.iter().map(|t| t / t_end).collect(),
            values: self.values.clone(),
            dim: self.dim,
        }
    }

    /// Replace the time grid, keeping values. The new grid must be valid.
    pub fn with_times(&self, times: Vec<f64>) -> Result<SampledPath> {
        SampledPath::new(times, self.values.clone(), self.dim)
    }

    pub fn check_same_grid(&self, other: &SampledPath) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(format!(
                "path dims {} and {}",
                self.dim, other.dim
            )));
        }
        if self.len() != other.len() {
            return Err(Error::GridMismatch(format!(
                "grid sizes {} and {}",
                self.len(),
                other.len()
            )));
        }
        for (a, b) in self.times.iter().zip(&other.times) {
            if (a - b).abs() > TIME_TOL {
                return Err(Error::GridMismatch(format!("grid times {a} and {b}")));
            }
        }
        Ok(())
    }

    // -- CSV -----------------------------------------------------------------

    /// Write as CSV with header `t,x1,...,xd`, 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let mut header = String::from("t");
        for k in 1..=self.dim {
            header.push_str(&format!(",x{k}"));
        }
        writeln!(w, "{header}")?;
        for i in 0..self.len() {
            let mut line = fmt_f64(self.times[i]);
            for v in self.value(i) {
                line.push(',');
                line.push_str(&fmt_f64(*v));
            }
            writeln!(w, "{line}")?;
        }
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<SampledPath> {
        let reader = BufReader::new(r);
        let mut lines = reader.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty csv".into()))??;
        let cols: Vec<&str> = header.trim().split(',').collect();
        if cols.first() != Some(&"t") || cols.len() < 2 {
            return Err(Error::Parse(format!(
                "expected header t,x1,...,xd, got `{header}`"
            )));
        }
        let dim = cols.len() - 1;
        let mut times = Vec::new();
        let mut values = Vec::new();
        for (lineno, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.trim().split(',').collect();
            if fields.len() != dim + 1 {
                return Err(Error::Parse(format!(
                    "row {}: expected {} fields, got {}",
                    lineno + 2,
                    dim + 1,
                    fields.len()
                )));
            }
            for (k, f) in fields.iter().enumerate() {
                let x: f64 = f.trim().parse().map_err(|_| {
                    Error::Parse(format!("row {}: bad float `{f}`", lineno + 2))
                })?;
                if k == 0 {
                    times.push(x);
                } else {
                    values.push(x);
                }
            }
        }
        SampledPath::new(times, values, dim)
    }
}

/// n equally spaced times covering [0, t_end].
pub fn uniform_times(n: usize, t_end: f64) -> Vec<f64> {
    assert!(n >= 2);
    (0..n)
        .map(|i| t_end * i as f64 / (n - 1) as f64)
        .collect()
}

/// The 4^n + 1 grid times l * 4^-n on [0, 1]; supports dyadic partitions up
/// to level n exactly.
pub fn dyadic_grid_times(n: u32) -> Vec<f64> {
    let pieces = 4usize.pow(n);
    (0..=pieces).map(|l| l as f64 / pieces as f64).collect()
}

// ---------------------------------------------------------------------------
// Partition
// ---------------------------------------------------------------------------

/// Ordered index subset of a sample grid containing both endpoints.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Partition {
    indices: Vec<usize>,
    grid_len: usize,
}

impl Partition {
    pub fn new(indices: Vec<usize>, path: &SampledPath) -> Result<Self> {
        let p = Partition {
            indices,
            grid_len: path.len(),
        };
        p.validate_for(path)?;
        Ok(p)
    }

    /// The full grid.
    pub fn full(path: &SampledPath) -> Partition {
        Partition {
            indices: (0..path.len()).collect(),
            grid_len: path.len(),
        }
    }

    /// The two-endpoint partition {0, n-1}.
    pub fn coarsest(path: &SampledPath) -> Partition {
        Partition {
            indices: vec![0, path.len() - 1],
            grid_len: path.len(),
        }
    }

    /// Partition at times l * T * 4^-n, l = 0..4^n. Errors if any required
    /// time is absent from the grid.
    pub fn dyadic(path: &SampledPath, n: u32) -> Result<Partition> {
        let pieces = 4u64.checked_pow(n).ok_or_else(|| {
            Error::InvalidParameter(format!("dyadic level {n} overflows"))
        })?;
        if pieces as usize >= usize::MAX / 2 {
            return Err(Error::InvalidParameter(format!("dyadic level {n} too deep")));
        }
        let t_end = path.duration();
        let mut indices = Vec::with_capacity(pieces as usize + 1);
        for l in 0..=pieces {
            let t = t_end * (l as f64 / pieces as f64);
            let i = path.index_of_time(t).map_err(|_| {
                Error::InvalidPartition(format!(
                    "dyadic level {n} requires grid time {t}, which is absent"
                ))
            })?;
            indices.push(i);
        }
        Partition::new(indices, path)
    }

    /// Nested partition taking 2^level equal index strides (rounded), always
    /// including both endpoints. level large enough returns the full grid.
    pub fn index_coarse(path: &SampledPath, level: u32) -> Partition {
        let n = path.len();
        let pieces = (1usize << level.min(60)).min(n - 1);
        let mut indices: Vec<usize> = (0..=pieces)
            .map(|j| ((j as f64) * (n - 1) as f64 / pieces as f64).round() as usize)
            .collect();
        indices.dedup();
        Partition {
            indices,
            grid_len: n,
        }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn mesh(&self, path: &SampledPath) -> f64 {
        self.indices
            .windows(2)
            .map(|w| path.time(w[1]) - path.time(w[0]))
            .fold(0.0, f64::max)
    }

    pub fn is_full(&self) -> bool {
        self.indices.len() == self.grid_len
    }

    /// True when `self` refines `coarser` (contains all its indices).
    pub fn refines(&self, coarser: &Partition) -> bool {
        if self.grid_len != coarser.grid_len {
            return false;
        }
        let mut it = self.indices.iter().peekable();
        'outer: for &c in &coarser.indices {
            while let Some(&&i) = it.peek() {
                if i == c {
                    continue 'outer;
                }
                if i > c {
                    return false;
                }
                it.next();
            }
            return false;
        }
        true
    }

    pub fn validate_for(&self, path: &SampledPath) -> Result<()> {
        if self.grid_len != path.len() {
            return Err(Error::InvalidPartition(format!(
                "partition built for a {}-point grid, path has {}",
                self.grid_len,
                path.len()
            )));
        }
        if self.indices.len() < 2 {
            return Err(Error::InvalidPartition("need at least 2 indices".into()));
        }
        if self.indices[0] != 0 || *self.indices.last().unwrap() != path.len() - 1 {
            return Err(Error::InvalidPartition(
                "partition must contain both endpoints".into(),
            ));
        }
        for w in self.indices.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::InvalidPartition(
                    "indices not strictly increasing".into(),
                ));
            }
        }
        if *self.indices.last().unwrap() >= path.len() {
            return Err(Error::InvalidPartition("index out of range".into()));
        }
        Ok(())
    }
}

/// Nested refinement schedule `levels[0] ⊂ levels[1] ⊂ ... ⊂ full grid`
/// built from index strides 2^(lo..=hi), with the full grid appended.
pub fn nested_schedule(path: &SampledPath, lo: u32, hi: u32) -> Vec<Partition> {
    let mut out = Vec::new();
    for level in lo..=hi {
        let p = Partition::index_coarse(path, level);
        if out.last().map(|l: &Partition| l == &p) != Some(true) {
            out.push(p);
        }
        if out.last().map(|p: &Partition| p.is_full()) == Some(true) {
            return out;
        }
    }
    if out.last().map(|p| p.is_full()) != Some(true) {
        out.push(Partition::full(path));
    }
    out
}

/// Dyadic schedule: partitions at times l * T * 4^-n for n in lo..=hi,
/// followed by the full grid when the last level does not already cover it.
pub fn dyadic_schedule(path: &SampledPath, lo: u32, hi: u32) -> Result<Vec<Partition>> {
    let mut out = Vec::new();
    for n in lo..=hi {
        out.push(Partition::dyadic(path, n)?);
    }
    if out.last().map(|p| p.is_full()) != Some(true) {
        out.push(Partition::full(path));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

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

    #[test]
    fn increment_endpoint_difference() {
        let p = SampledPath::from_points(vec![0.0, 1.0], &[vec![0.0, 0.0], vec![3.0, 4.0]])
            .unwrap();
        assert_eq!(p.increment(0, 1).unwrap(), vec![3.0, 4.0]);
        assert_eq!(p.increment(1, 1).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn increment_closed_loop_is_zero() {
        let p = triangle_loop();
        assert_eq!(p.increment(0, 3).unwrap(), vec![0.0, 0.0]);
        assert_eq!(p.increment(2, 2).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn increment_out_of_range() {
        let p = triangle_loop();
        assert!(p.increment(0, 9).is_err());
        assert!(p.increment(2, 1).is_err());
    }

    #[test]
    fn bracket_canonical_basis() {
        let m = lie_bracket(&[1.0, 0.0], &[0.0, 1.0]).unwrap();
        assert_eq!(m.get(0, 0), 0.0);
        assert_eq!(m.get(0, 1), 1.0);
        assert_eq!(m.get(1, 0), -1.0);
        assert_eq!(m.get(1, 1), 0.0);
    }

    #[test]
    fn bracket_of_equal_vectors_vanishes() {
        let u = [0.3, -1.7, 2.2];
        let m = lie_bracket(&u, &u).unwrap();
        assert_eq!(m.max_abs(), 0.0);
    }

    #[test]
    fn bracket_dim_mismatch() {
        assert!(lie_bracket(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn bracket_bilinearity() {
        let u = [0.4, -0.9];
        let v = [1.3, 0.2];
        let u2: Vec<f64> = u.iter().map(|x| 2.0 * x).collect();
        let v3: Vec<f64> = v.iter().map(|x| 3.0 * x).collect();
        let lhs = lie_bracket(&u2, &v3).unwrap();
        let rhs = lie_bracket(&u, &v).unwrap().scale(6.0);
        assert!(lhs.sub(&rhs).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn restrict_full_grid_is_identity() {
        let p = triangle_loop();
        let d = Partition::full(&p);
        let q = p.restrict(&d).unwrap();
        assert_eq!(q.times(), p.times());
        assert_eq!(q.values_flat(), p.values_flat());
    }

    #[test]
    fn restrict_coarsest_is_chord() {
        let p = triangle_loop();
        let d = Partition::coarsest(&p);
        let q = p.restrict(&d).unwrap();
        assert_eq!(q.len(), 2);
        assert_eq!(q.value(0), &[0.0, 0.0]);
        assert_eq!(q.value(1), &[0.0, 0.0]);
    }

    #[test]
    fn restrict_zigzag_selection() {
        let p = SampledPath::from_points(
            vec![0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0],
            &[vec![0.0], vec![1.0], vec![0.0], vec![1.0]],
        )
        .unwrap();
        let d = Partition::new(vec![0, 2, 3], &p).unwrap();
        let q = p.restrict(&d).unwrap();
        assert_eq!(q.values_flat(), &[0.0, 0.0, 1.0]);
    }

    #[test]
    fn restrict_rejects_non_subgrid() {
        let p = triangle_loop();
        assert!(Partition::new(vec![0, 1], &p).is_err());
        assert!(Partition::new(vec![1, 3], &p).is_err());
    }

    #[test]
    fn nested_restrictions_compose() {
        let times = uniform_times(9, 1.0);
        let vals: Vec<Vec<f64>> = (0..9).map(|i| vec![(i as f64).sin(), i as f64]).collect();
        let p = SampledPath::from_points(times, &vals).unwrap();
        let d2 = Partition::new(vec![0, 2, 4, 6, 8], &p).unwrap();
        let mid = p.restrict(&d2).unwrap();
        let d1_in_mid = Partition::new(vec![0, 2, 4], &mid).unwrap();
        let d1 = Partition::new(vec![0, 4, 8], &p).unwrap();
        let a = mid.restrict(&d1_in_mid).unwrap();
        let b = p.restrict(&d1).unwrap();
        assert_eq!(a.values_flat(), b.values_flat());
        assert_eq!(a.times(), b.times());
    }

    #[test]
    fn dyadic_partition_levels() {
        let p = SampledPath::from_fn(uniform_times(17, 1.0), 1, |t| vec![t]).unwrap();
        let d1 = Partition::dyadic(&p, 1).unwrap();
        let times: Vec<f64> = d1.indices().iter().map(|&i| p.time(i)).collect();
        assert_eq!(times, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let d0 = Partition::dyadic(&p, 0).unwrap();
        assert_eq!(d0.indices(), &[0, 16]);
        for n in 0..=2 {
            let d = Partition::dyadic(&p, n).unwrap();
            assert!((d.mesh(&p) - 0.25f64.powi(n as i32)).abs() < 1e-15);
        }
    }

    #[test]
    fn dyadic_partition_missing_points() {
        let p = SampledPath::from_fn(uniform_times(10, 1.0), 1, |t| vec![t]).unwrap();
        // 10-point grid has spacing 1/9; quarters are absent.
        assert!(Partition::dyadic(&p, 1).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let p = triangle_loop();
        let mut buf = Vec::new();
        p.write_csv(&mut buf).unwrap();
        let q = SampledPath::read_csv(buf.as_slice()).unwrap();
        assert_eq!(p.times(), q.times());
        assert_eq!(p.values_flat(), q.values_flat());
        assert_eq!(p.dim(), q.dim());
    }

    #[test]
    fn interpolate_onto_grid_exact_at_knots() {
        let times = uniform_times(9, 1.0);
        let vals: Vec<Vec<f64>> = (0..9)
            .map(|i| vec![(i as f64 * 0.7).sin(), (i as f64 * 0.3).cos()])
            .collect();
        let p = SampledPath::from_points(times, &vals).unwrap();
        let d = Partition::new(vec![0, 3, 8], &p).unwrap();
        let q = p.interpolate_onto_grid(&d).unwrap();
        for &i in d.indices() {
            assert_eq!(q.value(i), p.value(i));
        }
        // interior of [3, 8] is linear
        let lam = (p.time(5) - p.time(3)) / (p.time(8) - p.time(3));
        for k in 0..2 {
            let expect = p.value(3)[k] + lam * (p.value(8)[k] - p.value(3)[k]);
            assert!((q.value(5)[k] - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn schedules_are_nested_and_end_full() {
        let p = SampledPath::from_fn(uniform_times(257, 1.0), 1, |t| vec![t * t]).unwrap();
        let sched = nested_schedule(&p, 2, 10);
        assert!(sched.len() >= 3);
        for w in sched.windows(2) {
            assert!(w[1].refines(&w[0]));
        }
        assert!(sched.last().unwrap().is_full());
        let dy = dyadic_schedule(&p, 1, 4).unwrap();
        for w in dy.windows(2) {
            assert!(w[1].refines(&w[0]));
        }
        assert!(dy.last().unwrap().is_full());
    }
}
