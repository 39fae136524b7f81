use thiserror::Error;

/// Errors raised across the laboratory.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum HspError {
    #[error("unsupported group spec `{0}`")]
    UnsupportedSpec(String),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("element index {index} out of range for group of order {order}")]
    IndexOutOfRange { index: usize, order: usize },

    #[error("invalid group table: {0}")]
    InvalidTable(String),

    #[error("not a subgroup: {0}")]
    NotASubgroup(String),

    #[error("invalid subgroup family: {0}")]
    InvalidFamily(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("irrep decomposition failed: {0}")]
    DecompositionFailure(String),

    #[error("invalid response space: {0}")]
    InvalidResponseSpace(String),

    #[error("invalid slate: {0}")]
    InvalidSlate(String),

    #[error("response dimension {d} is smaller than subgroup index {index}")]
    ResponseTooSmall { d: usize, index: usize },

    #[error("full enumeration of {count} oracle functions exceeds the cap of {cap}; use sampling")]
    EnumerationCap { count: u128, cap: u128 },

    #[error("invalid priors: {0}")]
    InvalidPriors(String),

    #[error("invalid POVM: {0}")]
    InvalidPovm(String),

    #[error("invalid density operator: {0}")]
    InvalidState(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, HspError>;
