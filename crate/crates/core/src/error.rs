use std::path::PathBuf;

use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum PsError {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("clip {0} is not a valid source or target for this operation")]
    InvalidClip(String),

    #[error("ensemble too small for a stable estimate: m={m}, t={t} (expected m >= {min_m}, t >= {min_t}; stderr would be about {approx_stderr:.2e})")]
    Underpowered {
        m: usize,
        t: u64,
        min_m: usize,
        min_t: u64,
        approx_stderr: f64,
    },

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("unknown preset '{0}'")]
    UnknownPreset(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, PsError>;
