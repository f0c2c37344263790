//! Command-line driver for the stable-law market-efficiency pipeline.
//!
//! Reads daily closes, fits a time-varying alpha-stable return distribution
//! with exponentially discounted quantiles, and emits per-date efficiency
//! indicators with Monte-Carlo significance bands as plot-ready CSV files.
//!
//! Exit codes: 0 success, 2 input or configuration error, 3 numerical
//! failure inside the estimation pipeline.

mod commands;
mod config;
mod ingest;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::RunConfig;

#[derive(Parser)]
#[command(
    name = "stable-eff",
    version,
    about = "Time-varying stable-distribution market-efficiency estimation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score candidate discount factors by density-forecast discrepancy
    SelectOmega(CommonArgs),
    /// Write the per-date parameter, efficiency, and PIT trace with null flags
    Trace(CommonArgs),
    /// Write Monte-Carlo confidence bands under the efficient-market null
    Bands(CommonArgs),
    /// Write fitted return-density curves at chosen dates
    Density(DensityArgs),
    /// Write the range summary of the efficiency indicators
    Report(ReportArgs),
}

/// Flags shared by every command; unset values fall back to the config
/// file, then to built-in defaults.
#[derive(Args, Debug)]
struct CommonArgs {
    /// Input CSV of daily closes with `date` and `close` columns
    #[arg(long)]
    input: Option<PathBuf>,
    /// TOML config file; command-line flags override its values
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory for CSVs and the run manifest [default: .]
    #[arg(long)]
    out: Option<PathBuf>,
    /// Discount factor in (0,1), or `auto` to select by discrepancy [default: auto]
    #[arg(long)]
    omega: Option<String>,
    /// First estimation date (ISO); earlier returns form the warm-up
    #[arg(long)]
    t0: Option<String>,
    /// Minimum window length of the discrepancy statistic [default: 22]
    #[arg(long)]
    nu: Option<usize>,
    /// Discount search grid as start:end:step [default: 0.900:0.990:0.001]
    #[arg(long)]
    grid: Option<String>,
    /// Confidence levels, comma-separated [default: 0.95,0.99,0.995]
    #[arg(long)]
    levels: Option<String>,
    /// Random seed for the null simulation [default: 0]
    #[arg(long)]
    seed: Option<u64>,
    /// Simulated evaluation dates per null path [default: 4000]
    #[arg(long)]
    eval_dates: Option<usize>,
    /// Number of pooled null paths, seeded seed, seed+1, ... [default: 1]
    #[arg(long)]
    paths: Option<usize>,
    /// Drop quantile entries whose weight decays below this threshold
    #[arg(long, num_args = 0..=1, default_missing_value = "1e-15")]
    prune: Option<f64>,
    /// Absolute tolerance of distribution-function quadrature [default: 1e-7]
    #[arg(long)]
    quad_tol: Option<f64>,
}

#[derive(Args, Debug)]
struct DensityArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Trace dates to evaluate, comma-separated ISO dates
    #[arg(long)]
    dates: String,
}

#[derive(Args, Debug)]
struct ReportArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Summarize a previously written trace.csv instead of re-estimating
    #[arg(long)]
    from_trace: Option<PathBuf>,
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match &cli.command {
        Command::SelectOmega(args) => {
            commands::select_omega_cmd(&RunConfig::resolve(args)?)
        }
        Command::Trace(args) => commands::trace_cmd(&RunConfig::resolve(args)?),
        Command::Bands(args) => commands::bands_cmd(&RunConfig::resolve(args)?),
        Command::Density(args) => {
            commands::density_cmd(&RunConfig::resolve(&args.common)?, &args.dates)
        }
        Command::Report(args) => {
            commands::report_cmd(&RunConfig::resolve(&args.common)?, args.from_trace.as_deref())
        }
    }
}

/// Input and configuration problems exit 2; numerical failures inside the
/// pipeline (degenerate samples, undefined exponents, quadrature) exit 3.
fn classify(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(lib) = cause.downcast_ref::<stable_eff::Error>() {
            return match lib {
                stable_eff::Error::InvalidArgument(_) => 2,
                _ => 3,
            };
        }
    }
    2
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(classify(&err))
        }
    }
}
