use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "hybridfrac",
    version,
    about = "Hybrid-function solver for Caputo fractional ODE systems"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a model or inline system; writes node values as CSV and diagnostics as JSON.
    Solve(RunArgs),
    /// Fractional integral of a function of `t` on a uniform grid.
    Integrate(IntegrateArgs),
    /// Node-wise errors of the hybrid-function solution against a reference method.
    Compare(RunArgs),
    /// Reproduce the reference tables as CSV files and check their error bounds.
    Tables(TablesArgs),
    /// List the built-in models with their parameters.
    Models,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Marching,
    Global,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OracleArg {
    Rk4,
    Pece,
    Exact,
    /// The hybrid-function solver itself (a self-consistency check).
    Hf,
}

/// Grid and order flags shared by every numeric command.
#[derive(Debug, Clone, Default, Args)]
pub struct GridArgs {
    /// Step width.
    #[arg(long = "h", value_name = "REAL", allow_negative_numbers = true)]
    pub h: Option<f64>,
    /// Number of subintervals.
    #[arg(long = "m", value_name = "INT")]
    pub m: Option<usize>,
    /// Horizon.
    #[arg(long = "T", value_name = "REAL", allow_negative_numbers = true)]
    pub horizon: Option<f64>,
    /// Order of every state, or of state 1 when --beta/--gamma are given.
    #[arg(long, value_name = "REAL", allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// Order of state 2.
    #[arg(long, value_name = "REAL", allow_negative_numbers = true)]
    pub beta: Option<f64>,
    /// Order of state 3.
    #[arg(long, value_name = "REAL", allow_negative_numbers = true)]
    pub gamma: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// JSON run configuration; flags override its values.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Built-in model name (see `hybridfrac models`).
    #[arg(long, value_name = "NAME")]
    pub model: Option<String>,
    /// Parameter override, repeatable.
    #[arg(long = "param", value_name = "NAME=VALUE")]
    pub params: Vec<String>,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Newton residual tolerance.
    #[arg(long, value_name = "REAL", allow_negative_numbers = true)]
    pub tol: Option<f64>,
    /// Reference method for `compare`.
    #[arg(long, value_enum)]
    pub oracle: Option<OracleArg>,
    /// CSV output path; a `.json` sidecar is written next to it. Defaults to stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct IntegrateArgs {
    /// Integrand as an expression in `t`, or a builtin: `identity` (t), `unit` (1).
    #[arg(long, default_value = "identity", value_name = "EXPR")]
    pub function: String,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct TablesArgs {
    /// Output directory.
    #[arg(long, default_value = ".", value_name = "DIR")]
    pub out: PathBuf,
}
