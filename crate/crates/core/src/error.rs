use thiserror::Error;

/// Crate-wide error type. Variants are coarse on purpose: callers mostly
/// need to distinguish bad input from exhausted caps and numeric trouble.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("element does not belong to {spec}: {reason}")]
    SpecMismatch { spec: String, reason: String },

    #[error("unsupported operation for this group: {0}")]
    Unsupported(String),

    #[error("cap exceeded: {0}")]
    CapExceeded(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("requested tolerance {requested:e} is below the achievable {achievable:e}")]
    Tolerance { requested: f64, achievable: f64 },

    #[error("out of tabulated range: {0}")]
    OutOfRange(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn mismatch(spec: &crate::group::GroupSpec, reason: impl Into<String>) -> Self {
        Error::SpecMismatch {
            spec: spec.to_string(),
            reason: reason.into(),
        }
    }
}
