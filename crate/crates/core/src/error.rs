use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("prime {0} is not supported (supported: 307, 1009, 7919, 32003, 65521, 1000003, 2147483647)")]
    UnsupportedPrime(u64),

    #[error("invalid linear system: {0}")]
    InvalidSystem(String),

    #[error("duplicate point in sample")]
    DuplicatePoints,

    #[error("malformed coordinates: {0}")]
    MalformedCoordinates(String),

    #[error("reduction not supported: {0}")]
    UnsupportedReduction(String),

    #[error("reduction not applicable: {0}")]
    ReductionNotApplicable(String),

    #[error("degree tuple is empty or all zero")]
    DegenerateDegrees,

    #[error("non-positive degree in {0:?}")]
    NonPositiveDegree(Vec<u32>),

    #[error("field of characteristic {0} is not supported here")]
    Characteristic(u64),

    #[error("cannot plan a certificate for {0}")]
    Unplannable(String),

    #[error("certificate json: {0}")]
    Json(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
