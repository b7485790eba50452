use thiserror::Error;

use crate::scenario::ScenarioError;

/// Failures of a CLI run, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Scenario(#[from] ScenarioError),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("I/O error: {0}")]
    Io(String),

    /// A numerical failure that prevented the checks from running.
    #[error("run failed: {0}")]
    Run(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Scenario(_) | CliError::Config(_) => 2,
            CliError::Io(_) => 3,
            CliError::Run(_) => 1,
        }
    }
}

impl From<darboux_core::Error> for CliError {
    fn from(e: darboux_core::Error) -> Self {
        use darboux_core::Error as E;
        match e {
            E::RankDeficient(_) | E::SolveFailed(_) | E::Reconstruction(_) | E::Flow(_) => CliError::Run(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}
