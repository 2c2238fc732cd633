use thiserror::Error;

/// Errors raised by the algebraic operations of this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("level mismatch: expected {expected}, found {found}")]
    LevelMismatch { expected: u32, found: u32 },
    #[error("unsupported level {0}")]
    UnsupportedLevel(u32),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("element is not invertible (zero norm)")]
    NotInvertible,
    #[error("matrix is not unitriangular: {0}")]
    NotUnitriangular(String),
    #[error("index out of range: {0}")]
    Index(String),
    #[error("corner (1, {0}) is excluded")]
    ExcludedCorner(usize),
    #[error("matrix is not in the reduced subgroup for i = {0}")]
    NotInTilde(usize),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("oracle contract violated: {0}")]
    Contract(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
