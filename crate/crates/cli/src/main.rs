//! `cwmarket` — exact Curie-Weiss market-model tables, mean-field analysis,
//! trajectory simulation, and the chi-square independence test on windowed
//! trade data.

mod parse;
mod render;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cwmarket::Error as ModelError;

#[derive(Debug, Parser)]
#[command(
    name = "cwmarket",
    version,
    about = "Curie-Weiss market model: exact distributions, kernels, and independence testing"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact distribution of the interaction energy, as CSV and SVG.
    Dist(DistArgs),
    /// Solve the mean-field self-consistency equation and report stability.
    Meanfield(MeanfieldArgs),
    /// Sample a trajectory and compare occupancy against the stationary law.
    Simulate(SimulateArgs),
    /// Chi-square independence test on a windowed trade file.
    Test(TestArgs),
}

#[derive(Debug, Args)]
struct DistArgs {
    /// Number of traders.
    #[arg(long)]
    n: usize,
    /// Market temperature; zero gives the independent law.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    beta: f64,
    /// Directory to write the CSV table and SVG histogram into.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct MeanfieldArgs {
    /// Market temperature.
    #[arg(long, allow_hyphen_values = true)]
    beta: f64,
    /// Previous-step magnetization in [-1, 1].
    #[arg(long, allow_hyphen_values = true)]
    m_prev: f64,
    /// Root residual tolerance.
    #[arg(long, default_value_t = 1e-10)]
    tolerance: f64,
    /// Emit a JSON report instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// Number of traders.
    #[arg(long)]
    n: usize,
    /// Market temperature.
    #[arg(long, allow_hyphen_values = true)]
    beta: f64,
    /// Number of transitions to sample.
    #[arg(long)]
    steps: usize,
    /// Generator seed; the full trajectory is reproducible from it.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Leading states to discard before computing occupancy.
    #[arg(long, default_value_t = 0)]
    burn_in: usize,
    /// Directory to write the per-step trajectory CSV into.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Emit a JSON report instead of the occupancy CSV.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct TestArgs {
    /// Trade file (CSV/semicolon/tab separated; header required).
    #[arg(long)]
    input: PathBuf,
    /// Track the K most active traders.
    #[arg(long, default_value_t = 10)]
    n_top: usize,
    /// Explicit comma-separated trader list (overrides --n-top).
    #[arg(long)]
    traders: Option<String>,
    /// Window width, e.g. 10m, 600s, 1h.
    #[arg(long, default_value = "10m")]
    window: String,
    /// Significance level.
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Class scheme over pair-sum values, e.g. "-5;-3;3;13..45".
    /// Defaults to singletons with the upper tail merged until every
    /// expected count reaches 2.
    #[arg(long, allow_hyphen_values = true)]
    classes: Option<String>,
    /// Inactive-trader rule.
    #[arg(long, value_parser = ["carry-forward", "drop-window"], default_value = "carry-forward")]
    inactive_rule: String,
    /// Zero-net-quantity rule.
    #[arg(long, value_parser = ["carry-forward", "net-quantity"], default_value = "carry-forward")]
    tie_rule: String,
    /// Emit a JSON report instead of text.
    #[arg(long)]
    json: bool,
    /// Directory to write the windowed spin series CSV into.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Dist(args) => render::dist(args.n, args.beta, &args.out),
        Command::Meanfield(args) => {
            render::meanfield(args.beta, args.m_prev, args.tolerance, args.json)
        }
        Command::Simulate(args) => render::simulate(
            args.n,
            args.beta,
            args.steps,
            args.seed,
            args.burn_in,
            args.out.as_deref(),
            args.json,
        ),
        Command::Test(args) => render::test(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::from(exit_code(&error))
        }
    }
}

/// 2 usage, 3 data/format, 4 numerical/domain.
fn exit_code(error: &ModelError) -> u8 {
    match error {
        ModelError::Format(_) | ModelError::Io(_) | ModelError::Windowing(_) => 3,
        _ => 4,
    }
}
