use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("degenerate normalization: {0}")]
    Degenerate(String),
    #[error("unsupported case: {0}")]
    UnsupportedCase(String),
    #[error("grid error: {0}")]
    Grid(String),
    #[error("tail error: {0}")]
    Tail(String),
    #[error("overflow guard: {0}")]
    Overflow(String),
    #[error("no operator convention reaches tolerance: {0}")]
    Convention(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
