use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "strobe", version, about = "Stroboscopic tomography for parametric Kraus channel families")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spectrum, index of cyclicity, minimal-polynomial degree and discriminant.
    Analyze(AnalyzeArgs),
    /// Whether one observable suffices for reconstruction.
    CheckObservable(CheckArgs),
    /// Simulate or load measurements and reconstruct the initial state.
    Reconstruct(ReconstructArgs),
    /// Evaluate validity and optimality over a parameter grid, as CSV.
    Scan(ScanArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    TwoLevel,
    ThreeLevel,
    Lindblad,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    #[arg(long, value_enum)]
    pub model: ModelKind,
    /// Comma-separated weights: a1,a2,a3 or a1,…,a6.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub params: Vec<f64>,
    /// Decoherence rate.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub gamma: f64,
    /// JSON file with hamiltonian, jumps and rates, for the lindblad model.
    #[arg(long)]
    pub lindblad: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Relative rank tolerance; overrides STROBE_TOL.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Output file; standard output when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct ObservableArgs {
    /// JSON matrix file.
    #[arg(long)]
    pub observable: Option<PathBuf>,
    /// Qubit observable [[A, C+iD], [C-iD, B]] as A,B,C,D.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, num_args = 1)]
    pub abcd: Option<Vec<f64>>,
    /// Draw a random admissible observable from this seed.
    #[arg(long)]
    pub observable_seed: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub observable: ObservableArgs,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ReconstructArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub observable: ObservableArgs,
    /// JSON matrix file with the true initial state (simulation mode).
    #[arg(long, conflicts_with = "records", required_unless_present = "records")]
    pub rho0: Option<PathBuf>,
    /// Measurement records CSV with columns t,value,shots.
    #[arg(long)]
    pub records: Option<PathBuf>,
    /// Shots per instant in simulation mode: a positive integer or "exact".
    #[arg(long, default_value = "exact")]
    pub shots: String,
    /// Sampling seed; required with finite shots.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Comma-separated measurement instants; equispaced default otherwise.
    #[arg(long, value_delimiter = ',')]
    pub times: Option<Vec<f64>>,
    /// Also report the estimate projected onto the positive cone.
    #[arg(long)]
    pub psd_project: bool,
    /// Write the simulated records to this CSV file.
    #[arg(long, requires = "rho0")]
    pub write_records: Option<PathBuf>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ScanArgs {
    #[arg(long, value_enum)]
    pub model: ModelKind,
    /// Axis NAME=VALUE or NAME=START:STOP:STEP; one per weight.
    #[arg(long = "axis", required = true)]
    pub axes: Vec<String>,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub gamma: f64,
    /// Worker threads; 0 uses all available cores.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    #[command(flatten)]
    pub common: CommonArgs,
}
