//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("computation budget exceeded after {steps} reduction steps (limit {limit})")]
    Budget { steps: u64, limit: u64 },
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("{0}")]
    Math(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn math(msg: impl Into<String>) -> Self {
        Error::Math(msg.into())
    }
}
