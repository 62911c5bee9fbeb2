//! Error and result types shared across the crate.

use thiserror::Error;

/// Errors raised by signal, transform, filter and identification routines.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A caller-supplied argument violates a precondition.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// The inputs are valid but the requested value is undefined on them
    /// (e.g. correlation of a zero-norm signal, evaluation at a pole).
    #[error("domain error: {0}")]
    Domain(String),

    /// Input data failed validation (non-finite values, malformed records).
    #[error("invalid data: {0}")]
    Data(String),

    /// A numerical procedure failed to converge or lost too much precision.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// The input has a structure the algorithm does not support
    /// (e.g. repeated poles in a residue expansion).
    #[error("unsupported structure: {0}")]
    UnsupportedStructure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
