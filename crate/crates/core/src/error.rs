use crate::group::Degeneracy;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Clone, Debug, Error, PartialEq)]
pub enum Error {
    /// p is 1 or q-1 and no extra pairs were requested: the orbit is a plane polygon.
    #[error("slope {p}/{q} is excluded: the cyclic orbit is a plane polygon")]
    ExcludedSlope { p: i64, q: i64 },

    #[error("degenerate group ({0:?}): the hull has no generic facet structure")]
    Degenerate(Degeneracy),

    /// An identity that holds for every valid input failed; this is a caller bug.
    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn violation(msg: impl Into<String>) -> Self {
        Error::InvariantViolation(msg.into())
    }
}
