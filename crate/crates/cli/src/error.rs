use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}:{line}:{col}: {msg}")]
    Config { path: String, line: usize, col: usize, msg: String },

    #[error("{0}")]
    Usage(String),

    #[error("{context}: {source}")]
    Compute {
        context: String,
        #[source]
        source: seti_onoff::Error,
    },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } | CliError::Usage(_) => 2,
            CliError::Compute { .. } => 3,
            CliError::Io { .. } => 4,
        }
    }
}

pub(crate) trait ComputeContext<T> {
    fn context(self, what: impl FnOnce() -> String) -> Result<T, CliError>;
}

impl<T> ComputeContext<T> for seti_onoff::Result<T> {
    fn context(self, what: impl FnOnce() -> String) -> Result<T, CliError> {
        self.map_err(|source| CliError::Compute { context: what(), source })
    }
}
