use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Input that does not describe a valid object (bad label multiset, parse failure, ...).
    #[error("invalid input: {0}")]
    Validation(String),

    #[error("index {index} out of range for circle of size {n}")]
    OutOfRange { index: usize, n: usize },

    #[error("size mismatch: expected {expected}, got {actual}")]
    SizeMismatch { expected: usize, actual: usize },

    /// Arguments outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested search needs more states than the configured cap allows.
    #[error("state budget exceeded: {required} states required, cap is {cap}")]
    Budget { required: u128, cap: u64 },

    /// A runtime-verified invariant failed. Indicates a bug, never bad input.
    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("cache file: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
