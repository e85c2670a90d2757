//! Scenario runner behind the `etp-sim` binary: configuration schema,
//! dispatch into `etp-core`, and deterministic CSV/JSON/SVG output.

pub mod config;
pub mod output;
pub mod scenario;
pub mod svg;

use std::fmt;

/// Errors ranked by exit code: config 2, physics 3, I/O 4.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Physics(etp_core::Error),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Physics(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config error: {msg}"),
            CliError::Physics(e) => write!(f, "physics error: {e}"),
            CliError::Io(msg) => write!(f, "i/o error: {msg}"),
        }
    }
}

impl From<etp_core::Error> for CliError {
    fn from(e: etp_core::Error) -> Self {
        CliError::Physics(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
