use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {msg}")]
    Input { path: PathBuf, msg: String },
    #[error("assertion failed: {0}")]
    Assertion(String),
}

impl LabError {
    pub fn usage(msg: impl Into<String>) -> Self {
        LabError::Usage(msg.into())
    }

    /// 1 assertion failure, 2 usage or configuration error, 3 IO error.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Assertion(_) => 1,
            LabError::Usage(_) | LabError::Input { .. } => 2,
            LabError::Io { .. } => 3,
        }
    }
}

pub(crate) fn io_err(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> LabError {
    let path = path.into();
    move |source| LabError::Io { path, source }
}
