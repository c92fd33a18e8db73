use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = LabError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum LabError {
    #[error(transparent)]
    Model(#[from] borderline_core::Error),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("plot: {0}")]
    Plot(String),

    #[error("non-finite value in column `{column}`")]
    NonFinite { column: String },

    #[error("validation failed: {0}")]
    Validation(String),
}

impl LabError {
    pub fn config(msg: impl Into<String>) -> Self {
        LabError::Config(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        LabError::Io {
            path: path.into(),
            source,
        }
    }

    /// 1 for bad input, 2 for numerical non-convergence, 3 for a failed
    /// validation.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Model(borderline_core::Error::NonConvergence { .. }) => 2,
            LabError::Validation(_) => 3,
            _ => 1,
        }
    }
}
