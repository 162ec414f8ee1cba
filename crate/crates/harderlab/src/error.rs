//! Crate-wide error type. Variants map onto the CLI exit codes: usage
//! errors exit 2, capability/budget errors exit 3, everything else 1.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input: bad flag value, unparsable matrix, invalid domain.
    #[error("usage: {0}")]
    Usage(String),

    /// A mathematical precondition failed (pole hit, parity mismatch, ...).
    #[error("domain: {0}")]
    Domain(String),

    /// A verification assertion failed.
    #[error("assertion failed: {0}")]
    Assertion(String),

    /// The requested computation is outside the implemented backends
    /// (e.g. local series of rank >= 5 without a fixture).
    #[error("capability: {0}")]
    Capability(String),

    /// An enumeration or precision budget was exhausted.
    #[error("budget exceeded: {0}")]
    Budget(String),

    /// Rational reconstruction found no convergent within tolerance.
    #[error("reconstruction failure: {0}")]
    Reconstruction(String),

    /// A fixture was requested but not present in the store.
    #[error("missing fixture: {0}")]
    MissingFixture(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the CLI front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) | Error::Json(_) => 2,
            Error::Capability(_) | Error::Budget(_) => 3,
            _ => 1,
        }
    }
}
