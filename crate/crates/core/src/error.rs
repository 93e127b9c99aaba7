use thiserror::Error;

#[derive(Debug, Error)]
pub enum MatmulError {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// Operands that must be disjoint overlap in memory.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("malformed schedule: {0}")]
    Schedule(String),

    #[error("operation counts differ between repetitions: {0}")]
    Nondeterministic(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = MatmulError> = std::result::Result<T, E>;

pub(crate) fn dim_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(MatmulError::Dimension(msg.into()))
}
