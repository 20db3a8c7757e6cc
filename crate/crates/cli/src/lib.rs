//! Library half of the `fracwin` command-line tool: config loading, the
//! built-in scenarios, commands and CSV output.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod scenarios;

pub use config::{Overrides, ScenarioConfig};
pub use error::CliError;
