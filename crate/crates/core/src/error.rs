use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("incompatible code lengths: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("invalid phase code: {0}")]
    InvalidCode(String),

    #[error("invalid design grid: {0}")]
    InvalidGrid(String),

    #[error("invalid value for `{field}`: {reason}")]
    InvalidConfig { field: &'static str, reason: String },

    #[error("delay of {delay} bins is outside [0, {len})")]
    DelayOutOfRange { delay: usize, len: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("range-Doppler map is empty")]
    EmptyMap,

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
