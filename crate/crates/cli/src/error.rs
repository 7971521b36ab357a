use thiserror::Error;

/// Failures that end a run with exit code 1.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("job file line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("{what}: {source}")]
    Input {
        what: String,
        #[source]
        source: hsmult_core::Error,
    },
    #[error(transparent)]
    Core(#[from] hsmult_core::Error),
    #[error("{0}")]
    Usage(String),
}
