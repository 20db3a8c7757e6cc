//! Built-in scenarios for the three worked examples.

use crate::config::ScenarioConfig;
use crate::error::CliError;

pub const EXAMPLE1: &str = include_str!("../scenarios/example1.cfg");
pub const EXAMPLE2: &str = include_str!("../scenarios/example2.cfg");
pub const EXAMPLE3: &str = include_str!("../scenarios/example3.cfg");

pub const NAMES: [&str; 3] = ["example1", "example2", "example3"];

/// Source text of a built-in scenario.
pub fn source(name: &str) -> Option<&'static str> {
    match name {
        "example1" => Some(EXAMPLE1),
        "example2" => Some(EXAMPLE2),
        "example3" => Some(EXAMPLE3),
        _ => None,
    }
}

pub fn builtin(name: &str) -> Result<ScenarioConfig, CliError> {
    let src = source(name).ok_or_else(|| CliError::UnknownScenario(name.to_string()))?;
    ScenarioConfig::from_source(src, name)
}

/// A built-in name, or otherwise a path to a config file.
pub fn resolve(name_or_path: &str) -> Result<ScenarioConfig, CliError> {
    if source(name_or_path).is_some() {
        return builtin(name_or_path);
    }
    let path = std::path::Path::new(name_or_path);
    if path.exists() {
        ScenarioConfig::from_path(path)
    } else {
        Err(CliError::UnknownScenario(name_or_path.to_string()))
    }
}
