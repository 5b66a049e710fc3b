use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed or inconsistent input (dimension mismatch, out-of-range value, ...).
    #[error("input error: {0}")]
    Input(String),
    /// An exhaustive computation would exceed the configured enumeration cap.
    #[error("resource error: {requested} types exceed the enumeration cap of {cap}")]
    Resource { requested: String, cap: u64 },
    /// Well-formed input for which the requested quantity does not exist.
    #[error("value error: {0}")]
    Value(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}
