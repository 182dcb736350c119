//! Library half of the `gsp` command-line tool.

pub mod commands;
pub mod config;
pub mod error;
pub mod verify;

pub use config::RunConfig;
pub use error::{CliError, Result};
