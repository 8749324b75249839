use thiserror::Error;

/// Errors shared by every space implementation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Inputs violate an operation's preconditions (mismatched extents, bad indices, wrong space).
    #[error("domain error: {0}")]
    Domain(String),
    /// The truncation does not carry enough data to answer without guessing.
    #[error("budget exceeded: {0}")]
    Budget(String),
    /// A value fails one of its structural conditions. `condition` is the 1-based
    /// condition number in the space's definition.
    #[error("invalid {what}: condition {condition} violated ({detail})")]
    Invalid {
        what: &'static str,
        condition: u8,
        detail: String,
    },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn budget<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Budget(msg.into()))
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
