use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundError {
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("no convergence: {0}")]
    NonConvergence(String),
    #[error("problem too large: {0}")]
    Resource(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("output: {0}")]
    Output(String),
}

impl BoundError {
    /// Process exit code used by the command line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            BoundError::NonConvergence(_) => 4,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, BoundError>;

pub(crate) fn arg<T>(msg: impl Into<String>) -> Result<T> {
    Err(BoundError::Argument(msg.into()))
}
