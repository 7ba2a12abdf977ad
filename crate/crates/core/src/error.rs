use thiserror::Error;

/// Errors raised by the enumeration and counting layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported field order {0}: expected a prime power in {{2,3,4,5,7,8,9}}")]
    UnsupportedField(u32),

    #[error("element {value} out of range for GF({q})")]
    ElementOutOfRange { value: u8, q: u32 },

    #[error("division by zero in GF({0})")]
    DivisionByZero(u32),

    #[error("ambient mismatch: expected projective dimension {expected}, got {found}")]
    AmbientMismatch { expected: usize, found: usize },

    #[error("invalid parameter: {0}")]
    Param(String),

    #[error("infeasible: {what} requires {size} objects, cap is {cap}")]
    Infeasible { what: String, size: String, cap: u64 },

    #[error("subspace is not totally singular")]
    NotSingular,

    #[error("generator not found in generator set")]
    UnknownGenerator,

    #[error("set is not an Erdős–Ko–Rado set: members {0} and {1} are disjoint")]
    NotEkr(usize, usize),

    #[error("cache: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Param(msg.into()))
}
