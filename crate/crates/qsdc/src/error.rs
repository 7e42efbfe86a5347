use std::io;
use std::path::PathBuf;

/// Exit status for a run that raised a tampering alarm or terminated.
pub const EXIT_ALARM: i32 = 1;
/// Exit status for invalid flags or configuration.
pub const EXIT_USAGE: i32 = 2;
/// Exit status for I/O and other runtime faults.
pub const EXIT_FAULT: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("cannot read config {path}: {source}")]
    Config { path: PathBuf, source: io::Error },
    #[error("bad config file: {0}")]
    Toml(#[from] toml::de::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Core(#[from] qsdc_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config { .. } | CliError::Toml(_) => EXIT_USAGE,
            _ => EXIT_FAULT,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
