use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("{what} out of range: {value} (allowed {allowed})")]
    OutOfRange {
        what: &'static str,
        value: i64,
        allowed: String,
    },
    #[error("ambient dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("expected a subspace of dimension {expected}, got {got}")]
    WrongDimension { expected: usize, got: usize },
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error("inexact division: {0}")]
    InexactDivision(String),
    #[error("vertex count {count} exceeds cap {cap}")]
    CapExceeded { count: u128, cap: u128 },
    #[error("pair distance {distance} not in the open range (1, {k})")]
    DistancePrecondition { distance: usize, k: usize },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("graph validation failed: {0}")]
    Validation(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
