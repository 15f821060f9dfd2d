//! Crate-wide error type. The distinction that matters downstream is
//! refusal (a check declines to certify, with a reason) versus failure
//! (arithmetic ran fine and the identity is false) versus precision
//! exhaustion; the CLI maps these onto distinct exit codes.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// The requested computation cannot be certified as asked: ambiguous
    /// normalization, inapplicable hypothesis, unsupported parameter range.
    #[error("refused: {0}")]
    Refused(String),

    /// Working precision fell below the configured floor.
    #[error("precision floor: {0}")]
    PrecisionFloor(String),

    /// Invalid input or parameter combination.
    #[error("domain: {0}")]
    Domain(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
