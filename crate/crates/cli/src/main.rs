//! `kmvc`: count distinct elements in one pass, merge and inspect sketch
//! files, and run the estimator simulations.
//!
//! Exit status: 0 on success, 1 when a requested simulation check fails,
//! 2 on usage or I/O errors.

mod count;
mod output;
mod simulate;
mod sketches;
mod tokens;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kmvc_core::EstimatorId;

use crate::tokens::TokenMode;

pub const DEFAULT_K: u32 = 8;
pub const DEFAULT_M: u32 = 128;
pub const DEFAULT_SEED: u64 = 0;

#[derive(Debug, Parser)]
#[command(
    name = "kmvc",
    version,
    about = "One-pass distinct counting with a bucketed k-minimum-values sketch"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Estimate the number of distinct tokens in files or standard input.
    Count(CountArgs),
    /// Merge sketch files that share one configuration.
    Merge(MergeArgs),
    /// Print the contents and estimates of a sketch file.
    Inspect(InspectArgs),
    /// Run Monte-Carlo experiments on the estimators.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct CountArgs {
    /// Input files; standard input when none is given (or for "-").
    pub inputs: Vec<PathBuf>,
    /// Minima kept per bucket [default: 8]
    #[arg(long)]
    pub k: Option<u32>,
    /// Number of buckets [default: 128]
    #[arg(long)]
    pub m: Option<u32>,
    /// Hash seed [default: 0]
    #[arg(long)]
    pub seed: Option<u64>,
    /// xi-hat, xi3, xi1, xi2 or moment:ALPHA
    #[arg(long, default_value = "xi-hat", value_parser = parse_estimator)]
    pub estimator: EstimatorId,
    /// Also report every other estimator.
    #[arg(long)]
    pub all_estimators: bool,
    #[arg(long, value_enum, default_value_t = TokenMode::Line)]
    pub tokens: TokenMode,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub out: OutputFormat,
    /// Continue from a saved sketch; its configuration must match any given --k/--m/--seed.
    #[arg(long)]
    pub sketch_in: Option<PathBuf>,
    /// Save the final sketch here.
    #[arg(long)]
    pub sketch_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MergeArgs {
    /// Sketch files to merge (at least two).
    #[arg(required = true, num_args = 2..)]
    pub sketches: Vec<PathBuf>,
    #[arg(long)]
    pub sketch_out: PathBuf,
    #[arg(long, default_value = "xi-hat", value_parser = parse_estimator)]
    pub estimator: EstimatorId,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub out: OutputFormat,
}

#[derive(Debug, Args)]
pub struct InspectArgs {
    pub sketch: PathBuf,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub out: OutputFormat,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum, default_value_t = ModelArg::Independent)]
    pub model: ModelArg,
    /// True number of distinct elements; accepts forms like 1e6.
    #[arg(long, value_parser = parse_count, default_value = "1000000")]
    pub theta: u64,
    #[arg(long, default_value_t = DEFAULT_K)]
    pub k: u32,
    #[arg(long, default_value_t = DEFAULT_M)]
    pub m: u32,
    #[arg(long, value_parser = parse_count, default_value = "10000")]
    pub trials: u64,
    #[arg(long, default_value_t = 1)]
    pub rng_seed: u64,
    /// Estimators to run, comma separated.
    #[arg(long, value_delimiter = ',', value_parser = parse_estimator, default_value = "xi-hat")]
    pub estimator: Vec<EstimatorId>,
    /// Checks to evaluate: mean, variance, dominance.
    #[arg(long, value_delimiter = ',', value_enum)]
    pub check: Vec<CheckArg>,
    /// Measure how often every bucket fills up (exact model).
    #[arg(long)]
    pub coverage: bool,
    /// KS test of the pooled theta * X_(k) against Gamma(k, 1) (exact model).
    #[arg(long)]
    pub ks: bool,
    /// Mean of the minimum of theta uniforms against 1 / (theta + 1).
    #[arg(long)]
    pub naive: bool,
    /// Output format [default: csv]
    #[arg(long, value_enum)]
    pub out: Option<OutputFormat>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Independent,
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckArg {
    Mean,
    Variance,
    Dominance,
}

fn parse_estimator(s: &str) -> Result<EstimatorId, String> {
    s.parse().map_err(|e: kmvc_core::Error| e.to_string())
}

/// Positive integer, also written as `1e6` or `1_000_000`.
fn parse_count(s: &str) -> Result<u64, String> {
    let cleaned = s.replace('_', "");
    if let Ok(n) = cleaned.parse::<u64>() {
        return Ok(n);
    }
    match cleaned.parse::<f64>() {
        Ok(x) if x >= 0.0 && x.fract() == 0.0 && x <= u64::MAX as f64 => Ok(x as u64),
        _ => Err(format!("{s:?} is not a non-negative integer")),
    }
}

/// Outcome of a command that ran to completion.
pub enum Outcome {
    Ok,
    ChecksFailed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Count(args) => count::run(args),
        Command::Merge(args) => sketches::merge(args),
        Command::Inspect(args) => sketches::inspect(args),
        Command::Simulate(args) => simulate::run(args),
    };
    match result {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::ChecksFailed) => ExitCode::from(1),
        Err(err) if is_broken_pipe(&err) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("kmvc: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn is_broken_pipe(err: &anyhow::Error) -> bool {
    err.chain().any(|e| {
        e.downcast_ref::<std::io::Error>()
            .is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
            || e.downcast_ref::<csv::Error>()
                .is_some_and(|c| matches!(c.kind(), csv::ErrorKind::Io(io) if io.kind() == std::io::ErrorKind::BrokenPipe))
            || e.downcast_ref::<serde_json::Error>()
                .is_some_and(|j| j.io_error_kind() == Some(std::io::ErrorKind::BrokenPipe))
    })
}
