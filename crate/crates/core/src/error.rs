use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Operands live in different rings (variable count or coefficient field).
    #[error("structural mismatch: {0}")]
    Structural(String),

    /// A documented precondition of an operation does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// The input is valid but outside what the engine supports.
    #[error("unsupported input: {0}")]
    Unsupported(String),

    /// Finite differences never settled on a polynomial inside the sampled range.
    #[error("fitting failure: {0}")]
    Fitting(String),

    /// Random minimal-reduction generation ran out of attempts.
    #[error("minimal reduction generation failed after {attempts} attempts:\n{transcript}")]
    Generation { attempts: usize, transcript: String },

    /// An identity that must hold by theory failed; indicates a bug.
    #[error("invariant violation [{identity}]: {detail}")]
    Invariant { identity: String, detail: String },

    /// Malformed text input.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invariant(identity: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Invariant {
            identity: identity.into(),
            detail: detail.into(),
        }
    }
}
