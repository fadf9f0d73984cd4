use std::path::PathBuf;

use acp_core::evolution::EvolutionError;
use acp_core::info::InfoError;
use acp_core::BuildError;

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error("config: {field}: {reason}")]
    Config { field: String, reason: String },
    #[error("io: {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("format: {}: {reason}", path.display())]
    Format { path: PathBuf, reason: String },
    #[error("archive: {0}")]
    Archive(String),
    #[error("evolution: {0}")]
    Evolution(#[from] EvolutionError),
    #[error("build: {0}")]
    Build(#[from] BuildError),
    #[error("info: {0}")]
    Info(#[from] InfoError),
}

impl LabError {
    pub fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        LabError::Config { field: field.into(), reason: reason.into() }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        LabError::Io { path: path.into(), source }
    }

    pub fn format(path: impl Into<PathBuf>, reason: impl Into<String>) -> Self {
        LabError::Format { path: path.into(), reason: reason.into() }
    }

    /// The error category, first token of the one-line CLI message.
    pub fn kind(&self) -> &'static str {
        match self {
            LabError::Config { .. } => "config",
            LabError::Io { .. } => "io",
            LabError::Format { .. } => "format",
            LabError::Archive(_) => "archive",
            LabError::Evolution(_) => "evolution",
            LabError::Build(_) => "build",
            LabError::Info(_) => "info",
        }
    }
}

pub type Result<T, E = LabError> = std::result::Result<T, E>;
