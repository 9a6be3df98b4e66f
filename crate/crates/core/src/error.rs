use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("element is not canonical: {0}")]
    NonCanonical(String),

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("division by zero")]
    DivisionByZero,

    #[error("not a primitive root of unity: {0}")]
    NotPrimitive(String),

    #[error("unsupported transform size: {0}")]
    UnsupportedSize(String),

    #[error("incompatible field parameters: {0}")]
    Incompatible(String),
}
