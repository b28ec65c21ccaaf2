use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("{0} is not a prime power")]
    NotPrimePower(i128),
    #[error("extension degenerate: {0}")]
    Degenerate(String),
    #[error("inapplicable: {0}")]
    Inapplicable(String),
    #[error("not a listed simple supersingular family: {0}")]
    NotInTable(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
