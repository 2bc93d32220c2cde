use std::path::PathBuf;

use crate::grid::GridDims;

/// Errors raised by image operations, I/O and the script pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid grid dimensions {width}x{height}")]
    InvalidDims { width: usize, height: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimsMismatch { left: GridDims, right: GridDims },

    #[error("buffer of length {len} does not fit grid {dims}")]
    BufferLength { dims: GridDims, len: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("arithmetic error: {0}")]
    Arithmetic(String),

    #[error("{path}: {message}")]
    Image { path: PathBuf, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Script(#[from] crate::dsl::ScriptError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
