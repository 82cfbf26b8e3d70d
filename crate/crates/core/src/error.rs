use thiserror::Error;

/// Errors raised by group construction, linear algebra and cohomology routines.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BvhError {
    #[error("invalid group table: {0}")]
    InvalidTable(String),
    #[error("group order {order} exceeds the configured maximum {max}")]
    OrderTooLarge { order: usize, max: usize },
    #[error("invalid catalog parameters: {0}")]
    InvalidCatalog(String),
    #[error("unknown group spec `{0}`")]
    UnknownGroup(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("frattini subgroup requires a p-group, order {0} is not a prime power")]
    NotPGroup(usize),
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("element {0} is not central")]
    NotCentral(String),
    #[error("cochain is not a cocycle")]
    NotCocycle,
    #[error("group or modulus mismatch: {0}")]
    Mismatch(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("homomorphism check failed: {0}")]
    NotHomomorphism(String),
    #[error("work budget exceeded: degree {degree} needs {required} coordinates, budget is {budget}")]
    BudgetExceeded {
        degree: usize,
        required: u64,
        budget: u64,
    },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, BvhError>;

impl From<serde_json::Error> for BvhError {
    fn from(e: serde_json::Error) -> Self {
        BvhError::Parse(e.to_string())
    }
}

impl From<std::io::Error> for BvhError {
    fn from(e: std::io::Error) -> Self {
        BvhError::Io(e.to_string())
    }
}
