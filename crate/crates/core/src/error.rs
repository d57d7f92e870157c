use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("polynomial {poly:#b} is not primitive: orbit of alpha has size {orbit}")]
    NotPrimitive { poly: u32, orbit: usize },

    #[error("division by zero in finite field")]
    DivisionByZero,

    #[error("unsupported parameters: {0}")]
    UnsupportedParameters(String),

    #[error("{erasures} erasures cannot be handled by a code with d_min = {d_min}")]
    TooManyErasures { erasures: usize, d_min: usize },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("curve for {0} does not cross the target BER")]
    NotBracketed(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
