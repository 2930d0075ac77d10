use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("direction has norm {0:e}, below the 1e-9 minimum")]
    ZeroDirection(f64),
    #[error("direction component is not finite")]
    NonFiniteDirection,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("joint outcome count {count} exceeds the cap of {cap}")]
    SizeCap { count: u128, cap: u128 },
    #[error("invalid marginal problem: {0}")]
    InvalidProblem(String),
    #[error("cannot parse {0:?} as a decimal or p/q fraction")]
    ParseRational(String),
}

pub type Result<T> = std::result::Result<T, Error>;
