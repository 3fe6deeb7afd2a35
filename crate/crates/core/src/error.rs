//! Error type shared by every module of the crate.

use thiserror::Error;

/// Failures reported by the algebraic routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The caller supplied parameters outside the documented range.
    #[error("invalid parameters: {0}")]
    InvalidInput(String),
    /// A truncated computation ran out of known coefficients.
    #[error("precision exhausted: {0}")]
    Precision(String),
    /// The operator being inverted is not bijective for these parameters.
    #[error("operator is not invertible: {0}")]
    NotInvertible(String),
    /// A structural identity that must hold failed; this indicates a bug or
    /// a parameter set outside the range where the construction applies.
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

pub(crate) fn internal(msg: impl Into<String>) -> Error {
    Error::Internal(msg.into())
}

pub(crate) fn precision(msg: impl Into<String>) -> Error {
    Error::Precision(msg.into())
}
