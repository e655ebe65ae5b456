//! Batch command-line surface for the burstlab toolkit: run simulations,
//! analyses and the classifier, and reproduce the reference figures as data
//! files. No plotting; every output is CSV with `#`-prefixed metadata.

mod analyze;
mod classify_cmd;
mod config;
mod output;
mod reproduce;
mod simulate;

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "burstlab",
    version,
    about = "Stochastic herding-model / fBm lab: simulate, analyze, classify"
)]
struct Cli {
    /// Flat key=value config file; command-line flags override its entries.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate trajectories (sde-x, sde-y, agents, fbm).
    Simulate(simulate::SimulateArgs),
    /// Estimators over trajectory files (psd, pdf, bursts, fit).
    Analyze(analyze::AnalyzeArgs),
    /// Decide spurious vs true long-range memory for trajectories.
    Classify(classify_cmd::ClassifyArgs),
    /// Re-generate the data behind the reference figures.
    Reproduce(reproduce::ReproduceArgs),
}

/// Exit codes: 0 success, 2 validation, 3 numeric, 4 I/O or format.
fn exit_code(e: &burstlab::Error) -> u8 {
    use burstlab::Error::*;
    match e {
        InvalidParameter(_) | Domain(_) | InsufficientData(_) => 2,
        Numeric(_) => 3,
        Io(_) | Format(_) => 4,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let layered = match config::Layered::load(cli.config.as_deref()) {
        Ok(l) => l,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let result = match cli.command {
        Command::Simulate(args) => simulate::run(args, &layered),
        Command::Analyze(args) => analyze::run(args, &layered),
        Command::Classify(args) => classify_cmd::run(args, &layered),
        Command::Reproduce(args) => reproduce::run(args, &layered),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
