use std::path::PathBuf;

use serde_json::json;
use thiserror::Error;

use crate::csv::CsvError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: CsvError,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("{0}")]
    Config(String),

    /// Command-line parse failure.
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] robrep_core::Error),

    /// The solver hit a non-finite iterate; the partial report was written.
    #[error(
        "{solver} aborted at iteration {iteration}: non-finite iterate (partial report written)"
    )]
    Aborted {
        solver: &'static str,
        iteration: usize,
    },
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Csv { source, .. } => source.kind(),
            CliError::Io { .. } => "io",
            CliError::Json { .. } => "json",
            CliError::Config(_) => "config",
            CliError::Usage(_) => "usage",
            CliError::Core(e) => e.kind(),
            CliError::Aborted { .. } => "non_finite",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Aborted { .. } | CliError::Core(robrep_core::Error::NonFinite { .. }) => 2,
            _ => 1,
        }
    }

    /// Machine-readable form printed on stderr.
    pub fn to_json(&self) -> serde_json::Value {
        let mut body = json!({ "kind": self.kind(), "message": self.to_string() });
        match self {
            CliError::Csv {
                path,
                source: CsvError::Parse { line, col, .. },
            } => {
                body["path"] = json!(path);
                body["line"] = json!(line);
                body["col"] = json!(col);
            }
            CliError::Csv {
                path,
                source: CsvError::RaggedRows { line, .. },
            } => {
                body["path"] = json!(path);
                body["line"] = json!(line);
            }
            CliError::Csv { path, .. }
            | CliError::Io { path, .. }
            | CliError::Json { path, .. } => {
                body["path"] = json!(path);
            }
            CliError::Aborted { iteration, .. } => body["iteration"] = json!(iteration),
            _ => {}
        }
        json!({ "error": body })
    }
}
