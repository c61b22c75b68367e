//! Error type shared by every module.

use thiserror::Error;

/// Failures reported by the library. Every variant carries enough context to
/// reproduce the offending call.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("cap exceeded: {what} needs {needed}, cap is {cap}")]
    CapExceeded {
        what: &'static str,
        needed: String,
        cap: String,
    },

    #[error("case not covered: {0}")]
    CaseNotCovered(String),

    #[error("local density vanishes: {0}")]
    ZeroDensity(String),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
