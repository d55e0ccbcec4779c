//! Benchmark harness, configuration files, and result emission for the
//! pathrisk estimators.
//!
//! The binary front end lives in `main.rs`; everything here is a library so
//! the integration and acceptance tests can drive the harness directly.

pub mod bench;
pub mod config;
pub mod csvio;
pub mod svg;
pub mod sweep;

use std::fmt;

/// Top-level failure classes, mapped onto process exit codes by the binary.
#[derive(Debug)]
pub enum CliError {
    /// Bad invocation: missing files, unknown method names. Exit code 2.
    Usage(String),
    /// Config file parsed but failed validation, or did not parse. Exit code 3.
    Config(String),
    /// An estimator or the file system failed at runtime. Exit code 4.
    Runtime(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Runtime(m) => write!(f, "runtime error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Config(_) => 3,
            CliError::Runtime(_) => 4,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<pathrisk_core::Error> for CliError {
    fn from(e: pathrisk_core::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}
