//! Command-line argument definitions.
//!
//! Weights are taken as squared probabilities (`--c-sq`); the commands take
//! positive square roots internally, so sign and phase questions never
//! arise. Comma-separated list flags are parsed here into typed vectors and
//! every parse failure is a usage error (exit 2).

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{CliError, Result};
use crate::report::Format;

#[derive(Parser, Debug)]
#[command(
    name = "onticlab",
    version,
    about = "Verification suites, closing bounds, parameter sweeps, and ontic-model checking",
    propagate_version = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run the cross-library verification suite at desk scale.
    Verify(VerifyArgs),
    /// Compute the three-term closing bound for a weight profile and budget.
    Bound(BoundArgs),
    /// Sweep grids of (weights, eps, N, L) and emit one CSV row per point.
    Sweep(SweepArgs),
    /// Load a model description from JSON and run every applicable checker.
    Model(ModelArgs),
}

/// Faults that can be injected to exercise failure paths end to end.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FaultKind {
    /// Perturb one response-function row before the reproduction check.
    ResponseRow,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Seed for the randomized property trials.
    #[arg(long, default_value_t = 7)]
    pub seed: u64,

    /// Inject a known fault and expect the matching check to fail.
    #[arg(long, value_enum)]
    pub inject_fault: Option<FaultKind>,

    /// Tolerance for oracle comparisons (closed form vs brute force).
    #[arg(long, default_value_t = 1e-9)]
    pub tol_oracle: f64,

    /// Tolerance for identities that hold exactly up to rounding.
    #[arg(long, default_value_t = 1e-12)]
    pub tol_exact: f64,

    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct BoundArgs {
    /// Squared Schmidt weights, comma-separated (must sum to 1 within 1e-9).
    #[arg(long, value_name = "LIST", allow_hyphen_values = true)]
    pub c_sq: String,

    /// Total error budget for the three-term bound.
    #[arg(long, value_name = "BUDGET", allow_hyphen_values = true)]
    pub epsilon_total: f64,

    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Squared-weight preset, comma-separated; repeat the flag for several
    /// presets. All presets in one sweep must have the same rank, because
    /// the rank fixes the CSV column set.
    #[arg(long, value_name = "LIST", required = true)]
    pub c_sq: Vec<String>,

    /// Approximation-window half-widths, comma-separated.
    #[arg(long, value_name = "LIST", default_value = "0.1")]
    pub eps: String,

    /// Ladder multipliers N, comma-separated.
    #[arg(long, value_name = "LIST", default_value = "2,4,8")]
    pub big_n: String,

    /// Chain half-lengths L, comma-separated.
    #[arg(long, value_name = "LIST", default_value = "0,1")]
    pub chain_l: String,

    /// Number of probe angle pairs feeding the oracle-residual column.
    #[arg(long, default_value_t = 4)]
    pub angles: usize,

    /// Maximum number of worker threads for grid evaluation.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,

    /// Write the CSV here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ModelArgs {
    /// Path to the model JSON file.
    pub path: PathBuf,

    /// Pass threshold for defect checks on user-supplied rows.
    #[arg(long, default_value_t = 1e-9)]
    pub tol_oracle: f64,

    /// Tolerance for exact identities.
    #[arg(long, default_value_t = 1e-12)]
    pub tol_exact: f64,

    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

/// Parse a comma-separated list of floats.
pub fn parse_f64_list(raw: &str, flag: &str) -> Result<Vec<f64>> {
    let mut values = Vec::new();
    for piece in raw.split(',') {
        let piece = piece.trim();
        let value: f64 = piece.parse().map_err(|_| {
            CliError::usage(format!("{flag}: `{piece}` is not a number"))
        })?;
        values.push(value);
    }
    if values.is_empty() {
        return Err(CliError::usage(format!("{flag}: empty list")));
    }
    Ok(values)
}

/// Parse a comma-separated list of unsigned integers.
pub fn parse_u64_list(raw: &str, flag: &str) -> Result<Vec<u64>> {
    let mut values = Vec::new();
    for piece in raw.split(',') {
        let piece = piece.trim();
        let value: u64 = piece.parse().map_err(|_| {
            CliError::usage(format!("{flag}: `{piece}` is not an unsigned integer"))
        })?;
        values.push(value);
    }
    if values.is_empty() {
        return Err(CliError::usage(format!("{flag}: empty list")));
    }
    Ok(values)
}

/// Validate squared weights (positive, summing to 1 within 1e-9) and return
/// the positive amplitude vector.
pub fn amplitudes_from_squares(c_sq: &[f64]) -> Result<Vec<f64>> {
    if c_sq.is_empty() {
        return Err(CliError::usage("--c-sq: empty weight list"));
    }
    let mut total = 0.0;
    for &value in c_sq {
        if !value.is_finite() || value <= 0.0 {
            return Err(CliError::usage(format!(
                "--c-sq: weights must be strictly positive and finite, got {value}"
            )));
        }
        total += value;
    }
    if (total - 1.0).abs() > 1e-9 {
        return Err(CliError::usage(format!(
            "--c-sq: squared weights sum to {total}, which differs from 1 by more than 1e-9"
        )));
    }
    Ok(c_sq.iter().map(|&value| value.sqrt()).collect())
}
