use std::path::PathBuf;

use thiserror::Error;

/// Problems with the input: all map to exit code 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: invalid input at `{field}`{}: {message}", position(*line, *column))]
    Schema { path: String, field: String, line: usize, column: usize, message: String },
    #[error("{path}: {message}")]
    Input { path: String, message: String },
    #[error("missing --input")]
    MissingInput,
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

/// Semantic errors raised after parsing carry no position (line 0).
fn position(line: usize, column: usize) -> String {
    if line == 0 {
        String::new()
    } else {
        format!(" (line {line}, column {column})")
    }
}
