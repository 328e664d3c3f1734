use thiserror::Error;

/// Errors raised by the engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// The algebra presentation is malformed.
    #[error("presentation error: {0}")]
    Presentation(String),
    /// An operation was called outside its domain.
    #[error("usage error: {0}")]
    Usage(String),
    /// A precondition on the algebra (stratified, adapted, Koszul, ...) fails.
    #[error("refused: {0}")]
    Refused(String),
    /// The input text could not be parsed.
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
