//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("total dimension {got} exceeds the configured maximum {max}")]
    DimensionOverflow { got: usize, max: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian (max entry asymmetry {0:.3e})")]
    NotHermitian(f64),

    #[error("trace must be 1 (got {0})")]
    InvalidTrace(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPsd(f64),

    #[error("not a probability distribution: {0}")]
    InvalidProbability(String),

    #[error("columns are not an orthonormal basis (max deviation {0:.3e})")]
    NotOrthonormal(f64),

    #[error("bases are not mutually unbiased (max overlap deviation {0:.3e})")]
    NotUnbiased(f64),

    #[error("unsupported dimension {dim}: {reason}")]
    UnsupportedDimension { dim: usize, reason: &'static str },

    #[error("no mutually unbiased chart available for dimension {dim} at level {level}")]
    UnsupportedLevel { dim: usize, level: usize },

    #[error("input rejected: {0}")]
    RejectedInput(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
