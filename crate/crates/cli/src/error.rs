use std::path::{Path, PathBuf};

use fracwin::analysis::AnalysisError;
use fracwin::solver::SolveError;
use fracwin::sysdsl::ParseError;
use fracwin::{GridError, OperatorError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    InFile { path: PathBuf, source: Box<CliError> },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("unknown scenario '{0}' (built-ins: example1, example2, example3, or a path to a config file)")]
    UnknownScenario(String),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// Attaches the config file a failure came from.
    pub fn in_file(self, path: &Path) -> CliError {
        CliError::InFile { path: path.to_path_buf(), source: Box::new(self) }
    }

    pub fn io(path: &Path, source: std::io::Error) -> CliError {
        CliError::Io { path: path.to_path_buf(), source }
    }
}
