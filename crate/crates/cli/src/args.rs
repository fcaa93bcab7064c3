use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use outprob::{DistributionKind, SchemeKind};

#[derive(Debug, Parser)]
#[command(
    name = "outprob",
    version,
    about = "Distance-based outlier scores and their conversion to outlier probabilities",
    after_help = "Set OUTPROB_THREADS to fix the worker thread count."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write raw outlier scores
    Score(ScoreArgs),
    /// Write raw scores together with outlier probabilities
    Normalize(NormalizeArgs),
    /// Cross-validated ROC AUC over a grid of detectors and transformations
    Evaluate(EvaluateArgs),
    /// Contrast between inlier and outlier probabilities over m-neighborhood sizes
    ContrastScan(ContrastArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Delimited text file, one point per row
    #[arg(long)]
    pub input: PathBuf,
    /// Field delimiter (single ASCII character)
    #[arg(long, default_value_t = ',')]
    pub delimiter: char,
    /// The first row holds data, not column names
    #[arg(long)]
    pub no_header: bool,
    /// Label column, by header name or 0-based position
    #[arg(long)]
    pub label_column: Option<String>,
    /// Rescale every feature to [0, 1] (fitted on the reference set)
    #[arg(long)]
    pub minmax: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DetectorName {
    Knnw,
    Kthnn,
    Knn,
    Snn,
    Rsnn,
    Kthisnn,
    Lof,
    Slof,
    Db,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Closed,
    Open,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyName {
    Full,
    Triangular,
    MNeighborhood,
}

#[derive(Debug, Args)]
pub struct DetectorArgs {
    #[arg(long, value_enum, default_value_t = DetectorName::Knnw)]
    pub detector: DetectorName,
    /// Neighbor count
    #[arg(long, default_value_t = 5)]
    pub k: usize,
    #[command(flatten)]
    pub weights: WeightArgs,
    /// Sample size for snn, rsnn and kthisnn
    #[arg(long)]
    pub sample_size: Option<usize>,
    /// Sampling rounds for rsnn
    #[arg(long, default_value_t = 10)]
    pub rounds: usize,
    /// Radius for db
    #[arg(long)]
    pub delta: Option<f64>,
    /// Fraction of points that must lie beyond the radius for db
    #[arg(long)]
    pub alpha: Option<f64>,
}

#[derive(Debug, Args)]
pub struct WeightArgs {
    /// Weighting scheme for knnw
    #[arg(long, default_value_t = SchemeKind::Mean)]
    pub scheme: SchemeKind,
    #[arg(long, default_value_t = 1.0)]
    pub s: f64,
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    #[arg(long, default_value_t = 1.0)]
    pub b: f64,
}

#[derive(Debug, Args)]
pub struct StrategyArgs {
    /// Which reference distances the distribution is fitted to
    #[arg(long, value_enum, default_value_t = StrategyName::Full)]
    pub strategy: StrategyName,
    /// Neighborhood size for the m-neighborhood strategy
    #[arg(long)]
    pub m: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ScoreArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub detector: DetectorArgs,
    #[arg(long, value_enum, default_value_t = Mode::Closed)]
    pub mode: Mode,
    /// Reference set for open mode (same layout as the input)
    #[arg(long)]
    pub reference: Option<PathBuf>,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct NormalizeArgs {
    #[command(flatten)]
    pub score: ScoreArgs,
    #[arg(long, default_value_t = DistributionKind::Empirical)]
    pub distribution: DistributionKind,
    #[command(flatten)]
    pub strategy: StrategyArgs,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Detector families, comma separated (knnw, kthnn, knn, lof, slof)
    #[arg(long, default_value = "knnw")]
    pub detectors: String,
    /// Values of k, e.g. "1-100" or "1,5,10-20"
    #[arg(long, default_value = "1-100")]
    pub k_grid: String,
    /// Weighting schemes for knnw, comma separated
    #[arg(long, default_value = "max,mean,distance,exponential,linear,rank")]
    pub schemes: String,
    #[arg(long, default_value_t = 1.0)]
    pub s: f64,
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    #[arg(long, default_value_t = 1.0)]
    pub b: f64,
    /// Distributions, comma separated
    #[arg(long, default_value = "none,normal,exponential,empirical")]
    pub distributions: String,
    #[command(flatten)]
    pub strategy: StrategyArgs,
    #[arg(long, default_value_t = 2)]
    pub folds: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct ContrastArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub detector: DetectorArgs,
    #[arg(long, default_value_t = DistributionKind::Empirical)]
    pub distribution: DistributionKind,
    /// Values of m, e.g. "1-200"; defaults to 1..=min(200, n-1)
    #[arg(long)]
    pub m_grid: Option<String>,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long)]
    pub output: PathBuf,
}

/// Parses "1-5,8,10-12" into an ascending list without duplicates.
pub fn parse_grid(s: &str) -> Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let num = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("'{t}' is not a non-negative integer"))
        };
        match part.split_once('-') {
            Some((lo, hi)) => {
                let (lo, hi) = (num(lo)?, num(hi)?);
                if lo > hi {
                    return Err(format!("empty range '{part}'"));
                }
                out.extend(lo..=hi);
            }
            None => out.push(num(part)?),
        }
    }
    if out.is_empty() {
        return Err(format!("empty grid '{s}'"));
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Splits a comma-separated list and parses each item.
pub fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>, String>
where
    T::Err: std::fmt::Display,
{
    let items: Vec<T> = s
        .split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse().map_err(|e: T::Err| e.to_string()))
        .collect::<Result<_, _>>()?;
    if items.is_empty() {
        return Err(format!("empty list '{s}'"));
    }
    Ok(items)
}
