use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hsvd::Schedule;

#[derive(Debug, Parser)]
#[command(
    name = "hsvd",
    version,
    about = "Hyperbolic SVD and symmetric indefinite eigensolver"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a random symmetric test matrix, its factor and spectrum.
    Gen(GenArgs),
    /// Factor a symmetric matrix as G J G^T.
    Factor(FactorArgs),
    /// Hyperbolic SVD of a factor; writes sigma, U and V.
    Hsvd(RunArgs),
    /// Eigenvalues and eigenvectors of G J G^T.
    Eig(RunArgs),
    /// Verify pivot strategy coverage and equivalence for a range of orders.
    CheckStrategy(CheckArgs),
    /// Sweep counts, timings and accuracy across orders and sign counts.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub n: usize,
    /// Spectrum scale; defaults by order (20 up to 3168, then 30, 40, 50).
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Fix the number of positive eigenvalues instead of drawing signs.
    #[arg(long)]
    pub positives: Option<usize>,
    /// Bundle directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct FactorArgs {
    /// Symmetric matrix in GJH1 format.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum ScheduleArg {
    #[default]
    Modulus,
    RowCyclic,
}

impl From<ScheduleArg> for Schedule {
    fn from(s: ScheduleArg) -> Self {
        match s {
            ScheduleArg::Modulus => Schedule::ModifiedModulus,
            ScheduleArg::RowCyclic => Schedule::RowCyclic,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Bundle directory (uses G.gjh and lambda_true.csv) or a GJH1 factor.
    #[arg(long)]
    pub input: PathBuf,
    /// Reference eigenvalues for the error column, when not in the bundle.
    #[arg(long)]
    pub truth: Option<PathBuf>,
    /// Output directory; defaults to the bundle directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Skip the diagonal sort between quasi-sweeps
    #[arg(long)]
    pub no_sort: bool,
    /// Do not accumulate V^{-T} (no V.gjh is written)
    #[arg(long)]
    pub no_accumulate_v: bool,
    /// Quasi-sweep budget
    #[arg(long, default_value_t = hsvd::solver::DEFAULT_MAX_SWEEPS)]
    pub max_sweeps: usize,
    /// Threads for the rotations within a step; results do not depend on it
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    #[arg(long, value_enum, default_value_t = ScheduleArg::Modulus)]
    pub schedule: ScheduleArg,
    /// Pad an odd column count with a synthetic unit column.
    #[arg(long)]
    pub border: bool,
    /// Reduce a tall factor to its square R factor first.
    #[arg(long)]
    pub shorten: bool,
    /// Per-sweep statistics CSV.
    #[arg(long)]
    pub telemetry: Option<PathBuf>,
}

impl RunArgs {
    pub fn new(input: impl Into<PathBuf>) -> Self {
        Self {
            input: input.into(),
            truth: None,
            out: None,
            no_sort: false,
            no_accumulate_v: false,
            max_sweeps: hsvd::solver::DEFAULT_MAX_SWEEPS,
            workers: 1,
            schedule: ScheduleArg::Modulus,
            border: false,
            shorten: false,
            telemetry: None,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    /// Even order or inclusive range of even orders, e.g. `4..32`.
    #[arg(long)]
    pub n: String,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// Even matrix orders.
    #[arg(long, value_delimiter = ',', default_value = "160,288,512")]
    pub orders: Vec<usize>,
    /// Fractions of positive eigenvalues; 0 and 1 give definite matrices.
    #[arg(long, value_delimiter = ',', default_value = "0,0.1,0.5")]
    pub signs: Vec<f64>,
    #[arg(long, default_value_t = 1)]
    pub repeats: usize,
    /// Spectrum scale; defaults by order.
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    /// Output CSV; the table is always echoed to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
