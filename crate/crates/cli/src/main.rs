mod bounds;
mod commands;
mod error;
mod experiment;
mod family;

use clap::{Parser, Subcommand};

use commands::{BoundsArgs, CoverArgs, ExactArgs, ExperimentArgs, GenArgs, VerifyArgs};
use error::{CliError, CliResult};

/// Clique covers, set representations and randomized independent-set covers of k-uniform hypergraphs.
///
/// Exit codes: 0 ok, 1 invalid or failed, 2 precondition, 3 parse, 4 resource.
/// THETA_LAB_THREADS caps the number of worker threads.
#[derive(Debug, Parser)]
#[command(name = "theta-lab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate an instance.
    Gen(GenArgs),
    /// Cover the complement with independent sets.
    Cover(CoverArgs),
    /// Check a certificate, representation or clique cover against an instance.
    Verify(VerifyArgs),
    /// Exact theta, vartheta and independence number of a small instance.
    Exact(ExactArgs),
    /// Run a grid experiment described by a TOML file.
    Experiment(ExperimentArgs),
    /// Evaluate the bound formulas.
    Bounds(BoundsArgs),
}

fn configure_threads() -> CliResult<()> {
    let Ok(value) = std::env::var("THETA_LAB_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Usage(format!("THETA_LAB_THREADS must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn run(cli: Cli) -> CliResult<()> {
    configure_threads()?;
    match cli.command {
        Command::Gen(a) => commands::cmd_gen(&a),
        Command::Cover(a) => commands::cmd_cover(&a),
        Command::Verify(a) => commands::cmd_verify(&a),
        Command::Exact(a) => commands::cmd_exact(&a),
        Command::Experiment(a) => commands::cmd_experiment(&a),
        Command::Bounds(a) => commands::cmd_bounds(&a),
    }
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
