use thiserror::Error;

/// Errors raised by the library. Every variant maps to one CLI exit code.
#[derive(Debug, Error)]
pub enum NanbuError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("numerical failure: {msg} (best estimate {estimate:e})")]
    Numerical { msg: String, estimate: f64 },
    #[error("config error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl NanbuError {
    pub fn domain(msg: impl Into<String>) -> Self {
        NanbuError::Domain(msg.into())
    }

    pub fn input(msg: impl Into<String>) -> Self {
        NanbuError::Input(msg.into())
    }

    /// Process exit code used by the CLI (2 usage/config, 3 numerical).
    pub fn exit_code(&self) -> i32 {
        match self {
            NanbuError::Numerical { .. } => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, NanbuError>;
