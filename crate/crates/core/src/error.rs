use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("non-unit value: {0}")]
    NonUnit(String),
    #[error("missing value: {0}")]
    Missing(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("index out of range: {0}")]
    Index(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("mode violation: {0}")]
    Mode(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("resource cap exceeded: {0}")]
    Cap(String),
}

impl Error {
    /// Resource refusals are distinguished from domain errors by callers.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Cap(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
