use thiserror::Error;

/// Errors raised by the evaluation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation. The message
    /// names the violated precondition.
    #[error("domain error: {0}")]
    Domain(String),
    /// The high-precision reference evaluator declined the request.
    #[error("oracle refused: {0}")]
    OracleRefused(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
