use std::io;
use std::path::PathBuf;

use titeica_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid `{field}`: {reason}")]
    Config { field: &'static str, reason: String },
    #[error("cannot read config file {}: {source}", path.display())]
    ConfigRead { path: PathBuf, source: io::Error },
    #[error("malformed config file {}: {source}", path.display())]
    ConfigParse { path: PathBuf, source: serde_json::Error },
    #[error("cannot write output {}: {source}", path.display())]
    Output { path: PathBuf, source: io::Error },
    #[error("cannot write report: {0}")]
    Emit(String),
    #[error(transparent)]
    Core(#[from] CoreError),
}

impl CliError {
    pub fn config(field: &'static str, reason: impl Into<String>) -> Self {
        CliError::Config { field, reason: reason.into() }
    }

    /// 1 for numerical failures during verification, 2 for everything the
    /// caller got wrong (names, flags, files).
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => match e {
                CoreError::Unknown { .. }
                | CoreError::InvalidParam { .. }
                | CoreError::SingularMatrix { .. }
                | CoreError::NotEuclidean
                | CoreError::OutsideDomain { .. }
                | CoreError::Usage(_) => 2,
                _ => 1,
            },
            _ => 2,
        }
    }
}
