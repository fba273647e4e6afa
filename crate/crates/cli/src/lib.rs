//! Library side of the `nlgeval` command: configuration, dataset loading,
//! report assembly and rendering.

pub mod commands;
pub mod config;
pub mod dataset;
pub mod output;

use std::path::Path;

use thiserror::Error;

/// Any problem with the user's input: files, configuration or data. The
/// command exits with status 2 on these.
#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {reason}")]
    Malformed { path: String, line: usize, reason: String },
    #[error("{path}: duplicate record id {id:?}")]
    DuplicateId { path: String, id: String },
    #[error("configuration: {0}")]
    Config(String),
    #[error("{0}")]
    Data(String),
    #[error(transparent)]
    Resource(#[from] nlgeval::ResourceError),
    #[error(transparent)]
    Eval(#[from] nlgeval::EvalError),
}

impl InputError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        InputError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}
