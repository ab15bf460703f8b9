use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The request would exceed the configured memory budget.
    #[error("resource error: {what} needs {required} bytes, budget is {budget} bytes")]
    Resource {
        what: String,
        required: u64,
        budget: u64,
    },

    /// The brute-force oracle refuses inputs above its documented bound.
    #[error("oracle refused: limit {limit} exceeds oracle bound {bound}")]
    OracleBound { limit: u64, bound: u64 },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    /// A cache file failed validation or does not match the requested configuration.
    #[error("cache error: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
