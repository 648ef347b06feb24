use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("complex dimension n = {0} outside the supported range 2..=32")]
    InvalidModelDim(usize),

    #[error("invalid subalgebra spec: {0}")]
    InvalidSpec(String),

    #[error("subspace is not a Lie subalgebra (bracket residual {residual:.3e})")]
    NotSubalgebra { residual: f64 },

    #[error("orbit is not CR: {0}")]
    NotCr(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
