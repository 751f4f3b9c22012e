use std::path::PathBuf;

/// Errors produced by dataset loading, validation, and training.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at {path}:{line}, column {column}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: String,
        message: String,
    },

    #[error("invalid dataset: {0}")]
    InvalidData(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("degenerate total weight: over-all normalization requires a positive weight total")]
    DegenerateTotalWeight,

    #[error("weight overflow: a boosting weight left the finite f64 range")]
    WeightOverflow,

    #[error("model file error: {0}")]
    Model(String),
}

pub type Result<T> = std::result::Result<T, Error>;
