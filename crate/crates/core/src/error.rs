use thiserror::Error;

use crate::strategies::CapExceeded;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("could not parse {arg} from {input:?}: {reason}")]
    Parse {
        arg: String,
        input: String,
        reason: String,
    },

    /// A prime search would leave the 64-bit range.
    #[error("64-bit overflow: {0}")]
    Overflow(String),

    #[error("sieve budget exceeded: limit {limit} needs about {needed} bytes, cap is {cap} bytes")]
    BudgetExceeded { limit: u64, needed: u64, cap: u64 },

    /// A configured size cap (other than the sieve budget) was hit.
    #[error("{what} {value} exceeds configured cap {cap}")]
    AboveCap { what: String, value: u64, cap: u64 },

    /// A search exhausted its caps without a certified answer.
    #[error("search cap exceeded: {0}")]
    CapExceeded(Box<CapExceeded>),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
