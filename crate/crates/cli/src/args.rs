use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thd_core::io::OutputFormat;
use thd_core::Metric;

#[derive(Debug, Parser)]
#[command(name = "thd", version, about = "Minimal temporal paths and diffusion on time-varying hypergraphs")]
pub struct Cli {
    /// Print machine-readable JSON reports instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Log progress to stderr (repeat for more detail).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a network document, build it and print its statistics.
    Validate(ValidateArgs),
    /// Distance and witness walk between two vertices.
    Query(QueryArgs),
    /// Labels from many sources, written to a result file.
    Simulate(SimulateArgs),
    /// Write a synthetic network document.
    Gen(GenArgs),
    /// Compare the path algorithms against exhaustive enumeration.
    Verify(VerifyArgs),
    /// Time ingest and single-source labels on a synthetic network.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct Input {
    /// Network document (`-` reads stdin).
    pub input: PathBuf,

    /// Skip invalid edge records instead of failing.
    #[arg(long)]
    pub lenient: bool,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub input: Input,
}

#[derive(Debug, Args)]
pub struct QueryArgs {
    #[command(flatten)]
    pub input: Input,

    #[arg(long)]
    pub source: String,

    #[arg(long)]
    pub target: String,

    #[arg(long, default_value = "foremost")]
    pub metric: Metric,

    /// Departure tick (default: the source's earliest edge start).
    #[arg(long, allow_negative_numbers = true)]
    pub t0: Option<i64>,

    /// Ignore arrivals after this tick.
    #[arg(long, allow_negative_numbers = true)]
    pub horizon: Option<i64>,

    /// Hop budget for the shortest metric (default: vertex count).
    #[arg(long)]
    pub max_hops: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub input: Input,

    /// Result file.
    #[arg(short, long)]
    pub output: PathBuf,

    #[arg(long, default_value = "json")]
    pub format: OutputFormat,

    /// Metric to compute; repeat or comma-separate for several.
    #[arg(long = "metric", value_delimiter = ',', default_value = "foremost")]
    pub metrics: Vec<Metric>,

    /// Comma-separated source vertices (default: all).
    #[arg(long, value_delimiter = ',', conflicts_with = "sample")]
    pub sources: Option<Vec<String>>,

    /// Number of sources drawn uniformly with `--seed`.
    #[arg(long)]
    pub sample: Option<usize>,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Departure tick for every source (default: each source's earliest
    /// edge start).
    #[arg(long, allow_negative_numbers = true)]
    pub t0: Option<i64>,

    #[arg(long, allow_negative_numbers = true)]
    pub horizon: Option<i64>,

    #[arg(long)]
    pub max_hops: Option<usize>,

    /// Store a witness walk for every label.
    #[arg(long)]
    pub keep_witnesses: bool,

    /// Worker threads (default: available cores).
    #[arg(long, env = "THD_THREADS")]
    pub parallelism: Option<usize>,

    /// Progress file to resume from and save to.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,

    /// Sources between checkpoint saves.
    #[arg(long, default_value_t = 64)]
    pub checkpoint_every: usize,

    /// Stop after computing this many sources.
    #[arg(long, hide = true)]
    pub halt_after: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ShapeArg {
    Random,
    Chain,
    Star,
    Clique,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Output document (default: stdout).
    #[arg(short, long)]
    pub output: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "random")]
    pub shape: ShapeArg,

    #[arg(long, default_value_t = 100)]
    pub vertices: usize,

    #[arg(long, default_value_t = 200)]
    pub edges: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long)]
    pub min_participants: Option<usize>,

    #[arg(long)]
    pub max_participants: Option<usize>,

    /// Participant-count skew exponent (0 is uniform).
    #[arg(long)]
    pub skew: Option<f64>,

    /// Edges fall inside `[0, span]`.
    #[arg(long)]
    pub span: Option<i64>,

    #[arg(long)]
    pub min_interval: Option<i64>,

    #[arg(long)]
    pub max_interval: Option<i64>,

    /// Edge count of a chain or star, vertex count of a clique.
    #[arg(long, default_value_t = 8)]
    pub size: usize,

    /// Structured edge times: `ascending`, `descending` or a fixed tick.
    #[arg(long, default_value = "ascending", allow_hyphen_values = true)]
    pub times: String,

    /// Document name (default: derived from the parameters).
    #[arg(long)]
    pub name: Option<String>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Number of seeded random networks.
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Verify this network instead of generated ones.
    #[arg(long)]
    pub input: Option<PathBuf>,

    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub t0: i64,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 37_103)]
    pub vertices: usize,

    #[arg(long, default_value_t = 309_740)]
    pub edges: usize,

    /// Sampled sources.
    #[arg(long, default_value_t = 100)]
    pub sources: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, default_value = "foremost")]
    pub metric: Metric,
}
