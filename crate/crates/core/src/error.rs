use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("bribe vector is empty")]
    EmptyBribeVector,

    #[error("bribe values must be strictly increasing (entry {index} has bribe {bribe} after {previous})")]
    BribeOrder { index: usize, previous: u64, bribe: u64 },

    #[error("probability {value} is outside [0, 1]")]
    ProbabilityRange { value: String },

    #[error("bribe vector of challenger {challenger} is not monotone")]
    NotMonotone { challenger: usize },

    #[error("plan has {got} choices but the instance has {expected} challengers")]
    PlanLength { expected: usize, got: usize },

    #[error("challenger {challenger}: choice {choice} out of range for a vector of length {len}")]
    ChoiceOutOfRange { challenger: usize, choice: usize, len: usize },

    #[error("{what}: size {size} exceeds the configured cap {cap}")]
    CapExceeded { what: &'static str, size: u128, cap: u128 },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("malformed model: {0}")]
    MalformedModel(String),

    #[error("integralization failed: {0}")]
    Integralization(String),

    #[error("arithmetic overflow while {0}")]
    Overflow(&'static str),

    #[error("cannot parse rational {input:?}")]
    ParseRational { input: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInstance(msg.into())
    }

    pub(crate) fn malformed(msg: impl Into<String>) -> Self {
        Error::MalformedModel(msg.into())
    }
}

/// Returns `CapExceeded` when `size > cap`.
pub(crate) fn check_cap(what: &'static str, size: u128, cap: u128) -> Result<()> {
    if size > cap {
        Err(Error::CapExceeded { what, size, cap })
    } else {
        Ok(())
    }
}
