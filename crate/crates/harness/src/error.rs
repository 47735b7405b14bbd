use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, HarnessError>;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Core(#[from] ipcw_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("CSV row {row}, column {column}: {message}")]
    Csv {
        row: usize,
        column: String,
        message: String,
    },
    #[error("CSV: {0}")]
    CsvFormat(String),
    #[error("invalid JSON in {path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("function selector {selector:?}, position {position}: {message}")]
    Selector {
        selector: String,
        position: usize,
        message: String,
    },
    #[error("{0}")]
    Usage(String),
    #[error("thread pool: {0}")]
    Pool(String),
}

impl HarnessError {
    /// Exit status for the CLI: 3 for numeric failures, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Core(e) if e.is_numeric() => 3,
            _ => 2,
        }
    }
}
