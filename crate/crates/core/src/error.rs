use alloc::string::String;

/// Errors reported by the library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("boundary dimension m = {0} is outside the supported range 2..=12")]
    Dimension(usize),
    #[error("algebra context mismatch: m = {left} vs m = {right}")]
    ContextMismatch { left: usize, right: usize },
    #[error("point has {got} boundary coordinates, expected {expected}")]
    PointDimension { expected: usize, got: usize },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn unsupported(msg: impl Into<String>) -> Error {
    Error::Unsupported(msg.into())
}
