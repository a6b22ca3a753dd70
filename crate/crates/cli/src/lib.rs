//! Command-line front end for `flatloop-core`: reports, exports, the loop
//! file format and the anchor reproduction run.

pub mod anchors;
pub mod args;
pub mod commands;
pub mod formats;
pub mod report;

use thiserror::Error;

pub use args::Cli;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("check failed: {0}")]
    Check(String),
    #[error("{0}: {1}")]
    Io(String, #[source] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

/// Wraps a library error raised by invalid input.
pub fn usage<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Usage(e.to_string())
}

/// Runs a parsed command; `Ok(false)` means a reported check failed.
pub fn run(cli: Cli) -> Result<bool, CliError> {
    commands::dispatch(cli.command)
}

/// Parses `1,0,-2`.
pub fn parse_ints(s: &str) -> Result<Vec<i64>, CliError> {
    s.split(',')
        .map(|p| p.trim().parse::<i64>().map_err(|_| CliError::Usage(format!("not an integer list: {s:?}"))))
        .collect()
}

pub fn parse_floats(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("not a number list: {s:?}"))))
        .collect()
}
