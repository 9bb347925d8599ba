use std::path::PathBuf;

use adams_core::error::CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum WorkbenchError {
    #[error(transparent)]
    Core(#[from] CoreError),

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("malformed chart file: {0}")]
    Chart(String),

    #[error("cache at {path} has format version {found}, this build reads version {expected}; rerun with --rebuild")]
    CacheVersion { path: PathBuf, found: u32, expected: u32 },

    #[error("cache-integrity: {path}: {reason}")]
    CacheCorrupt { path: PathBuf, reason: String },

    #[error("audit failed: {0}")]
    AuditFailed(String),
}

impl WorkbenchError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        WorkbenchError::Io {
            path: path.into(),
            source,
        }
    }

    /// 0 success, 1 user error, 2 audit failure, 3 precision or truncation.
    pub fn exit_code(&self) -> i32 {
        match self {
            WorkbenchError::Core(e) => match e {
                CoreError::Precision { .. } | CoreError::Truncation(_) | CoreError::DegreeCap { .. } => 3,
                CoreError::Audit(_) | CoreError::InconsistentComplex(_) | CoreError::NonIntegral(_) => 2,
                _ => 1,
            },
            WorkbenchError::CacheCorrupt { .. } | WorkbenchError::AuditFailed(_) => 2,
            WorkbenchError::Io { .. }
            | WorkbenchError::Config(_)
            | WorkbenchError::Chart(_)
            | WorkbenchError::CacheVersion { .. } => 1,
        }
    }
}

pub type Result<T, E = WorkbenchError> = std::result::Result<T, E>;
