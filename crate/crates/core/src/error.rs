use alloc::string::String;

/// Errors raised by the core algorithms.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("malformed structure: {0}")]
    Structural(String),
    #[error("probability vector is not a valid simplex: {0}")]
    InvalidSimplex(String),
    #[error("syndrome cannot be decoded: {0}")]
    Undecodable(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("division by zero: {0}")]
    DivisionByZero(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

pub(crate) fn param(msg: impl Into<String>) -> Error {
    Error::Parameter(msg.into())
}

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::Dimension { expected, found })
    }
}
