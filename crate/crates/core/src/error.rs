use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A value left the signed 64-bit budget.
    #[error("value out of range: {0}")]
    Range(String),

    /// A precondition on the arguments was violated.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// A request exceeds a configured memory or work budget.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    /// A checkpoint does not match the plan it is being applied to, or is malformed.
    #[error("checkpoint integrity: {0}")]
    Integrity(String),

    /// A checkpointed run was stopped before completion.
    #[error("run interrupted; progress saved up to {saved_indices} of {total_indices} indices")]
    Interrupted {
        saved_indices: u64,
        total_indices: u64,
    },

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn overflow(what: impl std::fmt::Display) -> Self {
        Error::Range(format!("{what} overflows i64"))
    }
}
