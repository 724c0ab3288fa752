use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("n must be a positive integer, got {0}")]
    InvalidN(u64),

    #[error("n = {n} exceeds the factorization cap {cap}")]
    NTooLarge { n: u64, cap: u64 },

    #[error("dimension {dim} exceeds the cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("matrix data has length {len}, expected {expected}")]
    BadShape { len: usize, expected: usize },

    #[error(
        "Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})"
    )]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("{v} does not divide {n}")]
    NotADivisor { n: u64, v: u64 },

    #[error("{0}")]
    NotApplicable(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
