//! Command-line flags.

use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "wordstat",
    version,
    about = "Exact and simulated subword statistics of random words"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    /// Independent letters.
    Iid,
    /// Fixed letter counts, uniformly shuffled.
    Fixed,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count occurrences of a pattern (or combination) as a subsequence.
    Count(CountArgs),
    /// List the components of a whole space with dimensions and constants.
    Decompose(DecomposeArgs),
    /// Decompose a statistic and report its leading variance.
    Classify(ClassifyArgs),
    /// Exact second moments of statistics.
    Moments(MomentsArgs),
    /// Eigenvalues and eigenspace dimensions of the moment matrices.
    Spectrum(SpectrumArgs),
    /// Monte Carlo moments, written as CSV.
    Simulate(SimulateArgs),
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["text", "text_file"])))]
pub struct CountArgs {
    /// A word or a combination such as `ab - ba`.
    #[arg(long)]
    pub pattern: String,
    /// The text; `-` reads standard input.
    #[arg(long)]
    pub text: Option<String>,
    /// Read the text from a file; `-` reads standard input.
    #[arg(long)]
    pub text_file: Option<PathBuf>,
    /// Letters in order; defaults to the sorted letters of the text and pattern.
    #[arg(long)]
    pub alphabet: Option<String>,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    /// Probability model.
    #[arg(long, value_enum)]
    pub model: ModelArg,
    /// Letters in order, e.g. `ab`.
    #[arg(long)]
    pub alphabet: Option<String>,
    /// Letter probabilities, e.g. `1/2,1/2`.
    #[arg(long)]
    pub p: Option<String>,
    /// Letter counts of the patterns, e.g. `2,2`.
    #[arg(long)]
    pub kappa: Option<String>,
    /// Pattern length.
    #[arg(long)]
    pub k: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    /// A catalog name or a combination over `--alphabet`.
    #[arg(long)]
    pub stat: String,
    /// Probability model.
    #[arg(long, value_enum)]
    pub model: Option<ModelArg>,
    /// Letters in order, e.g. `ab`.
    #[arg(long)]
    pub alphabet: Option<String>,
    /// Letter probabilities, e.g. `1/2,1/2`.
    #[arg(long)]
    pub p: Option<String>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("size").required(true).args(["n", "nvec"])))]
pub struct MomentsArgs {
    /// Compute exactly (the only supported mode).
    #[arg(long)]
    pub exact: bool,
    /// Word length for the i.i.d. model.
    #[arg(long)]
    pub n: Option<usize>,
    /// Letter counts for the fixed model, e.g. `10,15`.
    #[arg(long)]
    pub nvec: Option<String>,
    /// Catalog names or combinations.
    #[arg(long, required = true, value_delimiter = ',')]
    pub stats: Vec<String>,
    /// Letters in order, e.g. `ab`.
    #[arg(long)]
    pub alphabet: Option<String>,
    /// Letter probabilities, e.g. `1/2,1/2`.
    #[arg(long)]
    pub p: Option<String>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("shape").required(true).args(["kappa", "k"])))]
pub struct SpectrumArgs {
    /// Two-letter composition `k_a,k_b`.
    #[arg(long)]
    pub kappa: Option<String>,
    /// Pattern length for the i.i.d. merging matrix.
    #[arg(long, requires = "r")]
    pub k: Option<usize>,
    /// `r` with `--k`; `r_a,r_b` with `--kappa` (all pairs when omitted).
    #[arg(long)]
    pub r: Option<String>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("size").required(true).args(["n", "nvec"])))]
pub struct SimulateArgs {
    /// Probability model.
    #[arg(long, value_enum)]
    pub model: ModelArg,
    /// Word length for the i.i.d. model.
    #[arg(long)]
    pub n: Option<usize>,
    /// Letter counts for the fixed model, e.g. `30,30,30`.
    #[arg(long)]
    pub nvec: Option<String>,
    /// Catalog names or combinations, comma separated.
    #[arg(long, required = true, value_delimiter = ',')]
    pub stats: Vec<String>,
    /// Number of Monte Carlo samples.
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    /// Base seed of the per-sample random streams.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads (results do not depend on this).
    #[arg(long)]
    pub threads: Option<usize>,
    /// Letters in order, e.g. `ab`.
    #[arg(long)]
    pub alphabet: Option<String>,
    /// Letter probabilities, e.g. `1/2,1/2`.
    #[arg(long)]
    pub p: Option<String>,
}
