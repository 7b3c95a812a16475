use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hall_core::kernels::Mean;
use hall_core::pipeline::Region;
use hall_core::quad::Method;
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "hall", version, about = "Normalization constants and densities of Bures-type priors")]
pub struct Cli {
    /// TOML file with defaults for any flag (top-level keys, or a table per command).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true, env = "HALL_WORKERS")]
    pub workers: Option<usize>,
    /// JSONL cache of normalization integrals.
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    /// Write the result here instead of stdout; the manifest goes to `<out>.manifest.json`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Normalization constant of the eigenvalue density.
    Hall(HallArgs),
    /// Average von Neumann entropy of the Bures ensemble.
    Entropy(EntropyArgs),
    /// Expected ordered spectrum of the Bures ensemble.
    Spectrum(SpectrumArgs),
    /// Closed-form density and marginal curves as CSV.
    Density(DensityArgs),
    /// Recognize a value as N / π^k.
    Recognize(RecognizeArgs),
    /// Bernoulli numbers or the denominators of their even partial sums.
    Bernoulli(BernoulliArgs),
    /// Two-level redundancy constants of the quasi-Bures and Bures priors.
    Redundancy(RedundancyArgs),
    /// Re-run the command recorded in a manifest and compare result digests.
    #[serde(skip)]
    Replay(ReplayArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Hall(_) => "hall",
            Command::Entropy(_) => "entropy",
            Command::Spectrum(_) => "spectrum",
            Command::Density(_) => "density",
            Command::Recognize(_) => "recognize",
            Command::Bernoulli(_) => "bernoulli",
            Command::Redundancy(_) => "redundancy",
            Command::Replay(_) => "replay",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct HallArgs {
    pub n: usize,
    #[arg(long)]
    pub method: Option<Method>,
    #[arg(long)]
    pub mean: Option<Mean>,
    #[arg(long)]
    pub beta: Option<u32>,
    /// Integration region (default: ordered for adaptive, full-box for qmc).
    #[arg(long)]
    pub region: Option<Region>,
    /// Relative tolerance (default from the per-dimension table).
    #[arg(long)]
    pub rel_tol: Option<f64>,
    /// Evaluation budget of the adaptive engine.
    #[arg(long)]
    pub max_evals: Option<u64>,
    /// Point budget of the QMC engine.
    #[arg(long)]
    pub max_points: Option<u64>,
    /// Points evaluated before the QMC stopping rule is consulted.
    #[arg(long)]
    pub min_points: Option<u64>,
    /// Cranley–Patterson shift seed for QMC.
    #[arg(long)]
    pub shift_seed: Option<u64>,
    #[arg(long)]
    pub recognize: bool,
    #[command(flatten)]
    #[serde(flatten)]
    pub recognition: RecognitionOptions,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct RecognitionOptions {
    /// Range of π powers, `A..B` inclusive.
    #[arg(long)]
    pub pi_powers: Option<String>,
    #[arg(long)]
    pub max_residual: Option<f64>,
    /// Number of partial-sum denominators to match against.
    #[arg(long)]
    pub sequence_terms: Option<usize>,
    /// Largest multiplier in sequence relations.
    #[arg(long)]
    pub max_multiplier: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct EntropyArgs {
    pub n: usize,
    #[arg(long)]
    pub rel_tol: Option<f64>,
    #[arg(long)]
    pub max_evals: Option<u64>,
    /// Skip the `n log n - p/q` fit.
    #[arg(long)]
    pub no_fit: bool,
    #[arg(long)]
    pub max_denominator: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct SpectrumArgs {
    pub n: usize,
    #[arg(long)]
    pub rel_tol: Option<f64>,
    #[arg(long)]
    pub max_evals: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DensityCase {
    Bures2,
    Bures3,
    Quasi2,
    Quasi3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Marginal {
    Theta,
    Phi,
    ThetaPhi,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct DensityArgs {
    #[arg(value_enum)]
    pub case: DensityCase,
    #[arg(long, value_enum)]
    pub marginal: Option<Marginal>,
    /// Samples per axis (midpoints of equal cells).
    #[arg(long)]
    pub grid: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct RecognizeArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub value: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub recognition: RecognitionOptions,
    /// Relate the integer to the partial-sum denominators, and search
    /// sequence-structured candidates directly.
    #[arg(long)]
    pub sequence_match: bool,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct BernoulliArgs {
    #[arg(long)]
    pub terms: Option<usize>,
    #[arg(long)]
    pub partial_sum_denominators: bool,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct RedundancyArgs {
    #[arg(long)]
    pub rel_tol: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Args, Deserialize)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
}
