use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or inconsistent arguments (index out of range, mismatched spaces, ...).
    #[error("input error: {0}")]
    Input(String),

    /// An enumeration would exceed the configured cap.
    #[error("budget error: {what} requires {required}, cap is {cap}")]
    Budget {
        what: &'static str,
        required: u128,
        cap: u128,
    },

    /// An operation was called on a value that does not satisfy its precondition.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// Text format diagnostic with a 1-based location.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}
