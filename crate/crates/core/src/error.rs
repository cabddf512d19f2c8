use thiserror::Error;

/// Errors surfaced by the numeric layer.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid modulus: {0}")]
    InvalidModulus(String),

    /// The symbolic pre-check found the modulus product non-integrable.
    /// Carries the witness exponents (power, log, log-log).
    #[error("modulus integral diverges: power {pow}, log {log}, log-log {loglog} (needs power > 0, or log > 1, or log = 1 and log-log > 1)")]
    DivergentIntegral { pow: f64, log: f64, loglog: f64 },

    #[error("path too large: {n} samples exceeds the {cap}-sample cap for O(n^2) dynamic programs")]
    SizeLimit { n: usize, cap: usize },

    #[error("blocks infeasible at desk scale: block {block} would need indices beyond {cap}")]
    BlocksInfeasible { block: usize, cap: u64 },

    #[error("internal consistency violated: {0}")]
    Inconsistency(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
