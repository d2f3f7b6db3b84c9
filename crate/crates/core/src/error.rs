use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid arrangement: {0}")]
    InvalidArrangement(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("genericity not achieved after {attempts} attempts: {reason}")]
    GenericityNotAchieved { attempts: u32, reason: String },
    #[error("unknown arrangement {name:?}; valid names: {valid}")]
    UnknownArrangement { name: String, valid: String },
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("search limit exceeded: {0}")]
    SearchLimit(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors that signal a broken theorem-encoded invariant rather
    /// than bad input.
    pub fn is_invariant_violation(&self) -> bool {
        matches!(self, Error::InvariantViolation(_))
    }
}
