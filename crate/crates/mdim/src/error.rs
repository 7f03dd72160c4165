use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_TASK: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    /// Invalid config or flags; `path` locates the offending value.
    #[error("{path}: {message}")]
    Usage { path: String, message: String },
    /// An enumeration, exact search or memory budget was exceeded.
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("{0}")]
    Task(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Usage { .. } => EXIT_USAGE,
            RunError::Budget(_) => EXIT_BUDGET,
            RunError::Task(_) | RunError::Io { .. } => EXIT_TASK,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        RunError::Io {
            path: path.into(),
            source,
        }
    }
}

pub fn usage(path: impl Into<String>, message: impl Into<String>) -> RunError {
    RunError::Usage {
        path: path.into(),
        message: message.into(),
    }
}

impl From<mdim_core::Error> for RunError {
    fn from(e: mdim_core::Error) -> Self {
        match e {
            mdim_core::Error::Budget { .. } | mdim_core::Error::ExactLimit { .. } => RunError::Budget(e.to_string()),
            other => RunError::Task(other.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, RunError>;
