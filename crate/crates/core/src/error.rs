use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("coordinate out of range: {0}")]
    Range(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("encoder precondition violated: {0}")]
    Encoding(String),
    #[error("malformed code: {0}")]
    Decode(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("search cap of {0} steps exceeded")]
    CapExceeded(u64),
    #[error("cannot build tiling plan: {0}")]
    Planning(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
