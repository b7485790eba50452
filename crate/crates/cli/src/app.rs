//! Argument parsing, output files and exit codes.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::commands::{execute, Command, LoadedScenario, Outcome, Settings};
use crate::error::CliError;
use crate::scenario::Outputs;

#[derive(Debug, Parser)]
#[command(name = "darboux", version, about = "Contact and symplectic Hamiltonian dynamics in Darboux charts")]
pub struct Cli {
    /// Scenario file (JSON).
    #[arg(long, global = true)]
    pub scenario: Option<PathBuf>,

    /// Seed for all random sampling; overrides the scenario's seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Number of random samples per check.
    #[arg(long, global = true)]
    pub samples: Option<usize>,

    /// Directory for the report and CSV files.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Integrate the scenario's Hamiltonian flow.
    Simulate,
    /// Energy, dissipation, volume and momentum checks along the flow.
    Invariants,
    /// Reduce by the scenario's symmetry and compare with the full flow.
    Reduce,
    /// Rebuild the full trajectory from the reduced one.
    Reconstruct,
    /// Checks of the symplectified form, lifted momentum and lifted corpus.
    Symplectify {
        /// Contact dimension; defaults to the scenario's, else 1, 2 and 3.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Compare reduction then symplectification with the reverse order.
    Commute {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        /// Momentum level as a comma separated list.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        mu: Vec<f64>,
    },
    /// Classify the built-in submanifold corpus and check complement
    /// dimensions and musical isomorphisms.
    Classify,
}

impl From<&CliCommand> for Command {
    fn from(c: &CliCommand) -> Self {
        match c {
            CliCommand::Simulate => Command::Simulate,
            CliCommand::Invariants => Command::Invariants,
            CliCommand::Reduce => Command::Reduce,
            CliCommand::Reconstruct => Command::Reconstruct,
            CliCommand::Symplectify { n } => Command::Symplectify { n: *n },
            CliCommand::Commute { n, k, mu } => Command::Commute {
                n: *n,
                k: *k,
                mu: mu.clone(),
            },
            CliCommand::Classify => Command::Classify,
        }
    }
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
    }
    std::fs::write(path, contents).map_err(|e| io_error(path, e))
}

/// Writes the outcome's files: into `--out` under default names, and to
/// the scenario's `outputs` (relative to `--out` or the working directory).
fn write_outputs(cli: &Cli, name: &str, outputs: &Outputs, outcome: &Outcome) -> Result<(), CliError> {
    let root = cli.out.clone().unwrap_or_default();
    let mut report_paths = Vec::new();
    let mut csv_paths = Vec::new();
    if cli.out.is_some() {
        report_paths.push(root.join(format!("{name}_report.json")));
        csv_paths.push(root.join(format!("{name}.csv")));
    }
    report_paths.extend(outputs.report.as_ref().map(|p| root.join(p)));
    csv_paths.extend(outputs.csv.as_ref().map(|p| root.join(p)));
    let json = outcome.report.to_json();
    for p in &report_paths {
        write_file(p, &json)?;
    }
    if let Some(csv) = &outcome.csv {
        for p in &csv_paths {
            write_file(p, csv)?;
        }
    }
    Ok(())
}

/// Runs a parsed command line, printing the report to stdout. Returns the
/// process exit code.
pub fn run_cli(cli: &Cli) -> Result<Outcome, CliError> {
    let scenario = match &cli.scenario {
        Some(path) => {
            let bytes = std::fs::read(path).map_err(|e| io_error(path, e))?;
            Some(LoadedScenario::from_bytes(&bytes)?)
        }
        None => None,
    };
    let outputs = scenario.as_ref().map(|s| s.scenario.outputs.clone()).unwrap_or_default();
    let settings = Settings {
        scenario,
        seed: cli.seed,
        samples: cli.samples,
    };
    let command = Command::from(&cli.command);
    let outcome = execute(&command, &settings)?;
    write_outputs(cli, command.name(), &outputs, &outcome)?;
    Ok(outcome)
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run_cli(&cli) {
        Ok(outcome) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(outcome.report.to_json().as_bytes()).is_err() {
                return 3;
            }
            if outcome.report.passed() {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
