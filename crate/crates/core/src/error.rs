//! Error type shared by all modules.

use thiserror::Error;

/// Errors reported by the library.
///
/// Domain violations (`m <= r`, `zeta(1)`, ...) are rejected eagerly so that
/// no computation starts on inputs where the underlying series or integral
/// diverges.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// An argument is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Working precision below the supported minimum of 53 bits.
    #[error("precision must be at least 53 bits, got {0}")]
    PrecisionTooLow(u32),

    /// A value could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

/// Validates a working precision in bits.
pub fn check_precision(prec: u32) -> Result<()> {
    if prec < 53 {
        Err(Error::PrecisionTooLow(prec))
    } else {
        Ok(())
    }
}
