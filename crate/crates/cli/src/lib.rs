//! Command-line front end for the `fixrate` library.
//!
//! Exit codes: 0 success, 1 check failed (`verify-space`, `classify`),
//! 2 usage or configuration error, 3 bound dominance violated on a
//! grid-verified mapping, 4 `λ >= 1`, 5 mismatched comparison hypotheses.

pub mod commands;
pub mod config;
pub mod format;

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

pub use config::{parse_config, ConfigError, ExperimentConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMINANCE: i32 = 3;
pub const EXIT_LAMBDA: i32 = 4;
pub const EXIT_HYPOTHESIS: i32 = 5;

#[derive(Debug, Error)]
#[error("{message}")]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<fixrate::Error> for CliError {
    fn from(e: fixrate::Error) -> Self {
        let code = match e {
            fixrate::Error::LambdaNotUsable { .. } => EXIT_LAMBDA,
            _ => EXIT_USAGE,
        };
        CliError { code, message: e.to_string() }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::usage(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::usage(format!("i/o error: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::usage(format!("csv error: {e}"))
    }
}

#[derive(Debug, Parser)]
#[command(name = "fixrate", version, about = "Fixed-point iteration experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the convexity-mapping axioms on seeded random samples.
    VerifySpace(VerifySpaceArgs),
    /// Test a catalog mapping against the contractive classes on a grid.
    Classify(ClassifyArgs),
    /// Run one configured iteration and write its error and envelope.
    Run(RunArgs),
    /// Compare two configured schemes by the ratio of their errors.
    Compare(CompareArgs),
    /// Print an error envelope.
    Bounds(BoundsArgs),
}

#[derive(Debug, Args)]
pub struct VerifySpaceArgs {
    /// euclidean or halfplane.
    #[arg(long)]
    pub model: String,
    /// Defaults to 2.
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Defaults to 1e-9 (euclidean) or 1e-7 (halfplane).
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    /// Catalog entry, e.g. `linear:q=1/3` or `qc1`.
    #[arg(long)]
    pub mapping: String,
    /// Points per axis; defaults to 257 on the line and 17 in the plane.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Class parameter to test; without it a class holds iff its grid estimate is below 1.
    #[arg(long)]
    pub h: Option<f64>,
    /// Zamfirescu constants `a,b,c`.
    #[arg(long)]
    pub abc: Option<String>,
    /// Class deciding the exit status.
    #[arg(long, default_value = "generalized-cq")]
    pub class: String,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    pub config: std::path::PathBuf,
    #[arg(long)]
    pub out: std::path::PathBuf,
    /// Envelope to compare against; defaults to the one matching the algorithm.
    #[arg(long)]
    pub bound: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CompareMode {
    Bounds,
    Empirical,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    pub a: std::path::PathBuf,
    pub b: std::path::PathBuf,
    #[arg(long, value_enum, default_value_t = CompareMode::Bounds)]
    pub mode: CompareMode,
    #[arg(long)]
    pub out: std::path::PathBuf,
    /// Number of steps.
    #[arg(long, default_value_t = 200)]
    pub n: usize,
    /// Envelope used for Xu-Noor in bounds mode.
    #[arg(long, default_value = "xunoor-simple")]
    pub xunoor_bound: String,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long)]
    pub kind: String,
    #[arg(long, conflicts_with = "h", required_unless_present = "h")]
    pub lambda: Option<f64>,
    /// Class parameter; `λ = max{h, h/(1-h)}`.
    #[arg(long)]
    pub h: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub d0: f64,
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub beta: Option<String>,
    #[arg(long)]
    pub gamma: Option<String>,
    #[arg(long, default_value_t = 200)]
    pub n: usize,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn execute<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match &cli.command {
        Command::VerifySpace(a) => commands::verify_space(a, out),
        Command::Classify(a) => commands::classify(a, out),
        Command::Run(a) => commands::run(a, out, err),
        Command::Compare(a) => commands::compare(a, out),
        Command::Bounds(a) => commands::bounds(a, out, err),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}
