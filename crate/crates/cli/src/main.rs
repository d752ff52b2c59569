//! `brushbot`: predictions, simulations, regime classification and sweeps
//! from a TOML run configuration.
//!
//! Exit codes: 0 success, 2 configuration or validation error, 3 resonance,
//! 4 model-domain abort.

use std::fmt;
use std::io::{ErrorKind, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod config;

#[derive(Debug, Parser)]
#[command(name = "brushbot", version, about = "Vibration-driven brush robot locomotion models")]
struct Cli {
    /// Run configuration (TOML).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Emit the standard-output report as one JSON object.
    #[arg(long, global = true)]
    json: bool,

    /// Output file for `simulate-r2` and `sweep`.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form flexible-brush prediction.
    #[command(name = "predict-r1")]
    PredictR1,
    /// Simulate rigid-pivot rocking and write the trajectory table.
    #[command(name = "simulate-r2")]
    SimulateR2,
    /// Classify the operating regime.
    Classify,
    /// Run the configured parameter sweep and write a CSV.
    Sweep,
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Resonance(String),
    ModelDomain(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Resonance(_) => 3,
            CliError::ModelDomain(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) | CliError::Resonance(m) | CliError::ModelDomain(m) => f.write_str(m),
        }
    }
}

impl From<brushbot_core::Error> for CliError {
    fn from(e: brushbot_core::Error) -> Self {
        use brushbot_core::Error;
        match e {
            Error::Resonance { .. } => CliError::Resonance(e.to_string()),
            Error::ModelDomain { .. } => CliError::ModelDomain(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

fn run(cli: Cli) -> Result<String, CliError> {
    let path = cli
        .config
        .ok_or_else(|| CliError::Config("--config <PATH> is required".into()))?;
    let cfg = config::RunConfig::load(&path)?;
    let out = || {
        cli.out
            .as_deref()
            .ok_or_else(|| CliError::Config("--out <PATH> is required for this command".into()))
    };
    match cli.command {
        Command::PredictR1 => commands::predict_r1(&cfg, cli.json),
        Command::SimulateR2 => commands::simulate_r2(&cfg, out()?, cli.json),
        Command::Classify => commands::classify(&cfg, cli.json),
        Command::Sweep => commands::sweep(&cfg, out()?, cli.json),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(report) => {
            let mut stdout = std::io::stdout().lock();
            match stdout.write_all(report.as_bytes()).and_then(|()| stdout.flush()) {
                Err(e) if e.kind() != ErrorKind::BrokenPipe => {
                    eprintln!("error: cannot write to stdout: {e}");
                    ExitCode::from(2)
                }
                _ => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
