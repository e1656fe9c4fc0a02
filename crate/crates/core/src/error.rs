use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is singular")]
    Singular,

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("variable count mismatch: {left} vs {right}")]
    VariableMismatch { left: usize, right: usize },

    #[error("polynomial division is not exact")]
    InexactDivision,

    #[error("invalid bracket ({i},{j}): {reason}")]
    InvalidBracket { i: usize, j: usize, reason: String },

    #[error("algebra is not nilpotent")]
    NotNilpotent,

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("invalid filiform parameter: {0}")]
    InvalidAlpha(String),

    #[error("unknown catalog entry {0:?}")]
    UnknownAlgebra(String),

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}
