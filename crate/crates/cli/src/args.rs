use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "ghzw", version, about = "GHZ-to-W local filtering, tomography simulation and analysis")]
pub struct Cli {
    /// Master seed; derived from entropy and printed when omitted.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Emit one JSON document instead of key=value lines.
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads for parallel stages (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a GHZ, H/V W or D/A W′ state to JSON.
    State(StateArgs),
    /// Apply the local filter to every qubit and post-select on all passes.
    Filter(FilterArgs),
    /// Tomography simulation and reconstruction.
    #[command(subcommand)]
    Tomo(TomoCommand),
    /// Fidelities, Monte Carlo error bars and plot data for a state.
    Analyze(AnalyzeArgs),
    /// State, filter, simulate, reconstruct and report in one run.
    Pipeline(PipelineArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum StateKindArg {
    Ghz,
    W,
    Wprime,
}

#[derive(Args, Debug)]
pub struct StateArgs {
    #[arg(value_enum)]
    pub kind: StateKindArg,
    #[arg(long)]
    pub n: usize,
    /// Relative sign of the GHZ superposition.
    #[arg(long, default_value = "plus", value_parser = ["plus", "minus"])]
    pub sign: String,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum BasisArg {
    Da,
    Hv,
}

#[derive(Args, Debug)]
pub struct FilterArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long = "a-squared", visible_alias = "a2")]
    pub a_squared: f64,
    #[arg(long, value_enum, default_value = "da")]
    pub basis: BasisArg,
    /// Exchange D and A on qubit 0 first (needed for even-N GHZ inputs).
    #[arg(long)]
    pub relabel: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum NoiseArg {
    None,
    Poisson,
}

#[derive(Subcommand, Debug)]
pub enum TomoCommand {
    /// Simulate coincidence counts for all 4^n settings.
    Sim(SimArgs),
    /// Maximum-likelihood reconstruction from a count table.
    Reconstruct(ReconstructArgs),
}

#[derive(Args, Debug)]
pub struct SimArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Shots per setting.
    #[arg(long, conflicts_with = "peak", required_unless_present = "peak")]
    pub shots: Option<f64>,
    /// Scale shots so the largest expected count equals this value.
    #[arg(long)]
    pub peak: Option<f64>,
    #[arg(long, value_enum, default_value = "poisson")]
    pub noise: NoiseArg,
    /// Expected accidental counts per setting.
    #[arg(long, default_value_t = 0.0)]
    pub background: f64,
    /// Count table (.json for JSON, CSV otherwise); stdout CSV when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct MleArgs {
    #[arg(long, default_value_t = 5000)]
    pub max_iterations: usize,
    #[arg(long, default_value_t = 1e-10)]
    pub tolerance: f64,
    /// Start from the maximally mixed state instead of linear inversion.
    #[arg(long)]
    pub mixed_start: bool,
}

#[derive(Args, Debug)]
pub struct ReconstructArgs {
    #[arg(long)]
    pub counts: PathBuf,
    #[command(flatten)]
    pub mle: MleArgs,
    /// Reconstruction JSON (density matrix plus diagnostics).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum PlotBasisArg {
    Hv,
    Da,
}

#[derive(Args, Debug, Clone)]
pub struct LocalOptArgs {
    /// Random starts for the local-unitary search.
    #[arg(long, default_value_t = 32)]
    pub starts: usize,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    /// State or reconstruction JSON to analyze.
    #[arg(long)]
    pub input: PathBuf,
    /// Optional state before filtering; adds the before/after comparison.
    #[arg(long)]
    pub before: Option<PathBuf>,
    /// Count table behind `--input`, for Monte Carlo error bars.
    #[arg(long)]
    pub counts: Option<PathBuf>,
    /// Count table behind `--before`.
    #[arg(long)]
    pub before_counts: Option<PathBuf>,
    /// Monte Carlo trials (needs the count tables).
    #[arg(long)]
    pub montecarlo: Option<usize>,
    /// Write density-matrix elements as CSV for plotting.
    #[arg(long)]
    pub plot_data: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "hv")]
    pub plot_basis: PlotBasisArg,
    /// Print the human-readable table instead of key=value lines.
    #[arg(long)]
    pub table: bool,
    #[command(flatten)]
    pub local_opt: LocalOptArgs,
    #[command(flatten)]
    pub mle: MleArgs,
}

#[derive(Args, Debug)]
pub struct PipelineArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long = "a2", visible_alias = "a-squared")]
    pub a_squared: f64,
    #[arg(long)]
    pub shots: f64,
    #[arg(long, value_enum, default_value = "poisson")]
    pub noise: NoiseArg,
    #[arg(long)]
    pub montecarlo: Option<usize>,
    /// Directory for the intermediate states, count tables and reconstructions.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    #[arg(long)]
    pub table: bool,
    #[command(flatten)]
    pub local_opt: LocalOptArgs,
    #[command(flatten)]
    pub mle: MleArgs,
}
