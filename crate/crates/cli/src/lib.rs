//! Configuration, experiment presets, CSV snapshots and oracle comparisons
//! for the `dem1d` command-line driver.

pub mod compare;
pub mod config;
pub mod presets;
pub mod snapshot;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("{0}")]
    Usage(String),

    #[error("snapshot {path}: {message}")]
    Snapshot { path: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Solver(#[from] dem_core::DemError),
}

pub type Result<T> = std::result::Result<T, CliError>;
