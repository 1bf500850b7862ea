//! Configuration, presets and commands of the `dissipative` tool.

pub mod config;
pub mod presets;
pub mod runner;

use thiserror::Error;

pub use config::{parse_config, ConfigEntries, ConfigError, RunConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration: {0}")]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Core(#[from] dissipative_core::Error),
}
