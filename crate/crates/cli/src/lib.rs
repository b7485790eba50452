//! Command line front end: scenario files, subcommands and JSON reports.

pub mod app;
pub mod checks;
pub mod commands;
pub mod error;
pub mod report;
pub mod scenario;

pub use app::{run, Cli};
pub use commands::{execute, Command, LoadedScenario, Outcome, Settings};
pub use error::CliError;
pub use report::{CheckResult, Report, Status};
pub use scenario::{parse_scenario, Scenario, ScenarioError};
