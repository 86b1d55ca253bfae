use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SosError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("invalid SOS specification: {0}")]
    InvalidSpec(String),

    #[error("orthogonal block is not diagonal: rows {row_a} and {row_b} overlap")]
    NotOrthogonal { row_a: usize, row_b: usize },

    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error("iterate diverged (non-finite value) at iteration {iteration}")]
    Divergence { iteration: usize },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("problem too large for dense factorization: dimension {dim} exceeds {limit}")]
    DenseGuard { dim: usize, limit: usize },
}

pub type Result<T> = std::result::Result<T, SosError>;
