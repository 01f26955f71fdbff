//! Batch front end: generate streams, estimate limit sets, compare streams,
//! rank decisions, and verify running-average loss bounds. One JSON config
//! per invocation; see the repository README for the config schemas.

mod commands;
mod config;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "statreg", version, about = "Statistical regularity toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Experiment config (JSON)
    #[arg(long)]
    config: PathBuf,
    /// Override the seed in the config
    #[arg(long)]
    seed: Option<u64>,
    /// Redirect output files into this directory
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a sampling net or symbol sequence
    Generate(CommonArgs),
    /// Estimate the limit set of a stream's empirical measures
    Estimate(CommonArgs),
    /// Compare two net streams for statistical equivalence
    Equiv(CommonArgs),
    /// Rank decisions under a loss matrix
    Decide(CommonArgs),
    /// Check running-average loss bounds along a net
    Verify(CommonArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Generate(args) => commands::generate(args),
        Command::Estimate(args) => commands::estimate(args),
        Command::Equiv(args) => commands::equiv(args),
        Command::Decide(args) => commands::decide(args),
        Command::Verify(args) => commands::verify(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
