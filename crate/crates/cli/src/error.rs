use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {reason}", location(field, *line))]
    Validation { field: String, line: Option<usize>, reason: String },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Model(#[from] wqed_core::Error),
}

fn location(field: &str, line: Option<usize>) -> String {
    match line {
        Some(line) => format!("line {line}: {field}"),
        None => field.to_string(),
    }
}

impl CliError {
    pub fn validation(field: impl Into<String>, line: Option<usize>, reason: impl Into<String>) -> Self {
        CliError::Validation { field: field.into(), line, reason: reason.into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation { .. } => 2,
            CliError::Io { .. } => 2,
            CliError::Model(e) if e.is_numerical() => 3,
            CliError::Model(_) => 2,
        }
    }
}
