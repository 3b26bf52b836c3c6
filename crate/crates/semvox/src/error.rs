use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the pipeline, split so callers can distinguish bad
/// inputs (validation) from failures during processing.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("zero-norm vector: {0}")]
    ZeroNorm(String),

    #[error("coordinate ({u}, {v}) out of bounds for {width}x{height} map")]
    OutOfBounds { u: f64, v: f64, width: u32, height: u32 },

    #[error("no pose for frame {0}")]
    MissingPose(usize),

    #[error("training diverged at epoch {epoch}: loss is not finite")]
    Divergence { epoch: usize },

    #[error("{path}: {detail} (at byte offset {offset})")]
    Format { path: PathBuf, offset: u64, detail: String },

    #[error("{path}: truncated file, expected {expected} bytes but found {actual}")]
    Truncated { path: PathBuf, expected: u64, actual: u64 },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// True for errors that indicate malformed input rather than a failure
    /// while processing valid data. The CLI maps these to exit code 1.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Divergence { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
