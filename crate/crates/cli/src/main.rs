//! `qups`: generate point sets, measure them, and scan rank-1 generators.

mod commands;
mod error;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "qups", version, about = "Quasi-uniform lattice point sets: generation, diagnostics and generator search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a point-set file.
    Gen(GenArgs),
    /// Measure a point-set file and emit a JSON report.
    Analyze(AnalyzeArgs),
    /// Mesh-ratio profile over growing members of a family, as CSV.
    Profile(ProfileArgs),
    /// Scan rank-1 generating vectors against κ thresholds.
    Search(SearchArgs),
    /// Run the bound-checking suites and print a pass/fail table.
    VerifyBounds(VerifyArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Rank1,
    Fibonacci,
    Hexcf,
    Kronecker,
    Frolov,
    Grid,
    GridAniso,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[arg(long)]
    pub kind: Kind,
    /// Generating vector for rank1, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub g: Vec<u64>,
    /// Modulus for rank1.
    #[arg(long)]
    pub n: Option<u64>,
    /// Index for fibonacci, side length for grid and grid-aniso.
    #[arg(long)]
    pub m: Option<u64>,
    /// Index for hexcf.
    #[arg(long)]
    pub k: Option<u32>,
    /// golden, pow2, liouville, or comma-separated values.
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub dim: Option<usize>,
    /// Number of Kronecker points.
    #[arg(long)]
    pub count: Option<u64>,
    /// Start the Kronecker sequence at n = 0.
    #[arg(long)]
    pub include_zero: bool,
    /// Frolov scale.
    #[arg(long)]
    pub a: Option<f64>,
    /// Frolov shift, comma separated (default zero).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub shift: Vec<f64>,
    /// Output file (default stdout).
    #[arg(short, long)]
    pub out: Option<std::path::PathBuf>,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    /// Point-set file (`-` for stdin).
    pub input: std::path::PathBuf,
    /// sep, cover, mesh, dstar, dual or all, comma separated.
    #[arg(long, default_value = "all")]
    pub metrics: String,
    /// 1, 2 or inf.
    #[arg(long, default_value = "inf")]
    pub norm: String,
    /// Covering grid resolution (default depends on N and d).
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long, default_value_t = qups::metrics::DEFAULT_DSTAR_BUDGET)]
    pub dstar_budget: u64,
    /// Random boxes tried when exact D* is over budget.
    #[arg(long, default_value_t = 100_000)]
    pub lb_trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(short, long)]
    pub out: Option<std::path::PathBuf>,
}

#[derive(Args, Debug)]
pub struct ProfileArgs {
    /// kronecker or frolov.
    #[arg(long)]
    pub kind: Kind,
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub include_zero: bool,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub shift: Vec<f64>,
    /// `pow<b>:<lo>..<hi>` for b^lo..=b^hi, or an explicit comma-separated list.
    #[arg(long)]
    pub indices: String,
    #[arg(long, default_value = "inf")]
    pub norm: String,
    /// Fixed covering grid (default adapts to each prefix).
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(short, long)]
    pub out: Option<std::path::PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeArg {
    Exhaustive,
    Random,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    /// Prime modulus.
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub dim: usize,
    /// `auto` loads thresholds from the committed quantile table.
    #[arg(long)]
    pub thresholds: Option<String>,
    #[arg(long)]
    pub kappa_dual_min: Option<f64>,
    #[arg(long)]
    pub kappa_primal_min: Option<f64>,
    #[arg(long)]
    pub dstar_max: Option<f64>,
    #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 10_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Scan {1..N-1}^d instead of {0..N-1}^d.
    #[arg(long)]
    pub exclude_zero: bool,
    #[arg(long, default_value_t = 100_000_000)]
    pub max_scan: u64,
    /// Also report the mesh-ratio upper bound of passing sets on this grid.
    #[arg(long)]
    pub mesh_grid: Option<usize>,
    /// CSV of passing vectors (default stdout).
    #[arg(short, long)]
    pub out: Option<std::path::PathBuf>,
    /// JSON summary file (default stderr).
    #[arg(long)]
    pub summary: Option<std::path::PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// cf, minima, meshratio, nalpha, frolov or all.
    #[arg(default_value = "all")]
    pub suite: String,
    /// Also write the rows as JSON.
    #[arg(long)]
    pub json: Option<std::path::PathBuf>,
}

fn configure_threads() -> Result<(), CliError> {
    if let Ok(v) = std::env::var("QUPS_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("QUPS_THREADS must be a positive integer, got '{v}'")))?;
        if n == 0 {
            return Err(CliError::Usage("QUPS_THREADS must be a positive integer, got '0'".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|_| match cli.command {
        Command::Gen(a) => commands::gen(&a),
        Command::Analyze(a) => commands::analyze(&a),
        Command::Profile(a) => commands::profile(&a),
        Command::Search(a) => commands::search(&a),
        Command::VerifyBounds(a) => commands::verify_bounds(&a),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qups: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
