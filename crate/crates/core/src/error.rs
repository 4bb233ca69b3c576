use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed input structure (bad pairing, degree violation, parse failure).
    #[error("structural input error: {0}")]
    Structural(String),
    /// Argument outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Request exceeds a desk-scale cap or search budget.
    #[error("capability error: {0}")]
    Capability(String),
    #[error("retry budget exhausted after {attempts} attempts")]
    RetryBudget { attempts: u64 },
    #[error("arc {0}-{1} lies inside a single triangle and cannot be flipped")]
    UnflippableArc(usize, usize),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Capability(_) | Error::RetryBudget { .. } => 3,
            Error::Internal(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn structural(msg: impl Into<String>) -> Error {
    Error::Structural(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn capability(msg: impl Into<String>) -> Error {
    Error::Capability(msg.into())
}
