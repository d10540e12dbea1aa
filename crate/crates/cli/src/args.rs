//! Command-line surface: one binary, five subcommands.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "circuit",
    version,
    about = "Graph-influence engine: influence queries, seed-set maximization, and Monte-Carlo cascade evaluation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Influence vector of one node, or the full influence matrix.
    Influence(InfluenceArgs),
    /// Per-node influence upper bounds, optionally with exact totals.
    Bounds(BoundsArgs),
    /// Select K seeds with the chosen algorithm.
    Maximize(MaximizeArgs),
    /// Monte-Carlo weighted-cascade spread of a given seed set.
    Simulate(SimulateArgs),
    /// Maximize and simulate across a damping grid; emits plot-ready rows.
    SweepLambda(SweepLambdaArgs),
}

#[derive(Args, Debug)]
pub struct GraphArgs {
    /// Edge list file: `src dst [weight]` per line, `#` comments.
    #[arg(long)]
    pub graph: PathBuf,

    /// Treat each input line as an undirected edge (emit both arcs).
    #[arg(long)]
    pub undirected: bool,

    /// Reverse every arc after ingestion (for networks recorded against the
    /// direction information flows).
    #[arg(long)]
    pub reverse: bool,

    /// How conductances become transmission probabilities.
    #[arg(long, value_enum, default_value_t = WeightSchemeArg::WeightedCascade)]
    pub weight_scheme: WeightSchemeArg,

    /// Per-arc probability for `--weight-scheme uniform`.
    #[arg(long, default_value_t = 0.1)]
    pub uniform_p: f64,

    /// Uniform damping coefficient, strictly inside (0, 1).
    #[arg(long, default_value_t = 0.25)]
    pub lambda: f64,

    /// Per-node damping file: `original_id lambda` per line (overrides --lambda).
    #[arg(long)]
    pub lambda_file: Option<PathBuf>,

    /// Solver tolerance (relative max-update).
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,

    /// Solver sweep budget (default: 10n clamped to [100, 10000]).
    #[arg(long)]
    pub max_sweeps: Option<usize>,

    /// Run exactly this many sweeps instead of tolerance-based termination.
    #[arg(long)]
    pub fixed_sweeps: Option<usize>,

    /// Worker threads (results never depend on this).
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Args, Debug)]
pub struct OutputArgs {
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    pub format: FormatArg,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightSchemeArg {
    /// t_ij = c_ij / d_j (weighted cascade).
    #[value(name = "weighted-cascade", alias = "wc")]
    WeightedCascade,
    Uniform,
    /// Conductances already are probabilities.
    Explicit,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormatArg {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgorithmArg {
    Circuit,
    Reference,
    Degree,
    #[value(name = "degree-discount")]
    DegreeDiscount,
    Pagerank,
    Celf,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum DegreeOrientationArg {
    Out,
    In,
}

#[derive(Args, Debug)]
pub struct InfluenceArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub output: OutputArgs,

    /// Source node (original label).
    #[arg(long, conflicts_with = "all")]
    pub source: Option<u64>,

    /// Emit the full influence matrix (size-capped).
    #[arg(long)]
    pub all: bool,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub output: OutputArgs,

    /// Also compute exact total influence for the top-N nodes by bound.
    #[arg(long, default_value_t = 0)]
    pub exact_top: usize,
}

#[derive(Args, Debug)]
pub struct MaximizeArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub output: OutputArgs,

    #[arg(long, value_enum)]
    pub algorithm: AlgorithmArg,

    /// Number of seeds to select.
    #[arg(long)]
    pub k: usize,

    /// Degree ranking orientation for degree-based baselines.
    #[arg(long, value_enum, default_value_t = DegreeOrientationArg::Out)]
    pub degree_orientation: DegreeOrientationArg,

    /// Propagation probability for degree-discount.
    #[arg(long, default_value_t = 0.01)]
    pub p: f64,

    /// PageRank damping factor.
    #[arg(long, default_value_t = 0.85)]
    pub damping: f64,

    /// PageRank convergence tolerance.
    #[arg(long, default_value_t = 1e-8)]
    pub pagerank_tol: f64,

    /// Monte-Carlo runs per spread estimate (celf).
    #[arg(long, default_value_t = 10_000)]
    pub runs: usize,

    /// RNG seed for randomized algorithms (echoed in the report).
    #[arg(long, default_value_t = 42)]
    pub rng_seed: u64,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub output: OutputArgs,

    /// Seed set: `all`, an inline list like `1,5,9`, or a file of labels.
    #[arg(long)]
    pub seeds: String,

    #[arg(long, default_value_t = 10_000)]
    pub runs: usize,

    #[arg(long, default_value_t = 42)]
    pub rng_seed: u64,

    /// Also write per-run activation counts as CSV.
    #[arg(long)]
    pub per_run_csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SweepLambdaArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub output: OutputArgs,

    /// Seeds per grid point.
    #[arg(long)]
    pub k: usize,

    /// Grid as `start:end:step` (inclusive) or a comma list like `0.1,0.25`.
    #[arg(long, default_value = "0.1:0.9:0.1")]
    pub lambdas: String,

    /// Monte-Carlo runs per spread measurement.
    #[arg(long, default_value_t = 10_000)]
    pub runs: usize,

    #[arg(long, default_value_t = 42)]
    pub rng_seed: u64,
}
