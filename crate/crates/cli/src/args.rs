use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use sparsemetric::gauge::Gauge;
use sparsemetric::metric::parse_metric_list;
use sparsemetric::{Order, ScalarMetric};

#[derive(Debug, Parser)]
#[command(
    name = "sparsemetric",
    version,
    about = "Sparsity metrics, ball geometry and brute-force sparse recovery"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Distance between two points under a product p-metric.
    MetricEval(MetricEvalArgs),
    /// Randomized search for metric-axiom violations.
    AxiomsCheck(AxiomsCheckArgs),
    /// Boundary points of a planar ball, as `theta,x,y` CSV rows.
    BallSample(BallSampleArgs),
    /// Check the subset relation between two d_s balls.
    BallNest(BallNestArgs),
    /// d_s(x, y) for shrinking s, next to the support distance d_0.
    LimitScan(LimitScanArgs),
    /// Randomized convexity falsification of a gauge.
    ConvexityCheck(GaugeCheckArgs),
    /// Randomized homogeneity falsification of a gauge.
    HomogeneityCheck(GaugeCheckArgs),
    /// Hausdorff distance between two CSV point sets.
    Hausdorff(HausdorffArgs),
    /// Minkowski functional of the open unit p-norm ball.
    Minkowski(MinkowskiArgs),
    /// Sparsest solution of Ax = b by support enumeration.
    SparseSolve(SparseSolveArgs),
    /// Compare the d_s minimizer over sampled solutions with the l0 optimum.
    SurrogateRank(SurrogateRankArgs),
}

pub fn metric_list(s: &str) -> Result<Vec<ScalarMetric>, String> {
    parse_metric_list(s).map_err(|e| e.to_string())
}

pub fn number_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<f64>().map_err(|_| format!("invalid number `{t}`"))
        })
        .collect()
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Output file (default: standard output).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Zero tolerance for discrete comparisons and support counting
    /// (default: $TAU or 1e-9).
    #[arg(long)]
    pub tau: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct MetricArgs {
    /// Comma-separated component metrics: abs, pow:<s> with 0 < s <= 1, disc.
    /// A single descriptor applies to every coordinate.
    #[arg(long, value_parser = metric_list)]
    pub metric: ::std::vec::Vec<ScalarMetric>,
    /// Product exponent: a number >= 1 or `inf`.
    #[arg(long, default_value = "1")]
    pub p: Order,
}

#[derive(Debug, Args)]
pub struct MetricEvalArgs {
    #[command(flatten)]
    pub metric: MetricArgs,
    #[arg(long, value_parser = number_list, allow_hyphen_values = true)]
    pub x: ::std::vec::Vec<f64>,
    #[arg(long, value_parser = number_list, allow_hyphen_values = true)]
    pub y: ::std::vec::Vec<f64>,
    /// Emit a JSON record instead of the bare number.
    #[arg(long)]
    pub json: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct AxiomsCheckArgs {
    #[arg(long, value_parser = metric_list, conflicts_with = "gauge", required_unless_present = "gauge")]
    pub metric: Option<::std::vec::Vec<ScalarMetric>>,
    #[arg(long, default_value = "1")]
    pub p: Order,
    /// Check d(x, y) = g(x - y) for a gauge `fp:<p>` or `gs:<s>` instead.
    #[arg(long)]
    pub gauge: Option<Gauge>,
    /// Dimension; defaults to the number of metric descriptors.
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long, default_value_t = -10.0, allow_hyphen_values = true)]
    pub lo: f64,
    #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
    pub hi: f64,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of violation witnesses written out.
    #[arg(long, default_value_t = 10)]
    pub max_witnesses: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct BallSampleArgs {
    #[command(flatten)]
    pub metric: MetricArgs,
    #[arg(long)]
    pub r: f64,
    #[arg(long, default_value_t = 360)]
    pub dirs: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, value_parser = number_list, allow_hyphen_values = true, default_value = "0,0")]
    pub center: ::std::vec::Vec<f64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct BallNestArgs {
    #[arg(long)]
    pub r: f64,
    #[arg(long)]
    pub s_fine: f64,
    #[arg(long)]
    pub s_coarse: f64,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct LimitScanArgs {
    #[arg(long, value_parser = number_list, allow_hyphen_values = true)]
    pub x: ::std::vec::Vec<f64>,
    /// Defaults to the origin.
    #[arg(long, value_parser = number_list, allow_hyphen_values = true)]
    pub y: Option<::std::vec::Vec<f64>>,
    /// Strictly decreasing exponents in (0, 1].
    #[arg(long, value_parser = number_list, default_value = "1,0.5,0.1,0.01,0.001")]
    pub s: ::std::vec::Vec<f64>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct GaugeCheckArgs {
    /// `fp:<p>` for (Σ|xᵢ|^p)^{1/p} or `gs:<s>` for Σ|xᵢ|^s.
    #[arg(long)]
    pub gauge: Gauge,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    /// Sampling box (convexity only).
    #[arg(long, default_value_t = -10.0, allow_hyphen_values = true)]
    pub lo: f64,
    #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
    pub hi: f64,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct HausdorffArgs {
    /// CSV file, one point per row.
    #[arg(long)]
    pub k: PathBuf,
    /// CSV file, one point per row.
    #[arg(long)]
    pub a: PathBuf,
    #[command(flatten)]
    pub metric: MetricArgs,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct MinkowskiArgs {
    /// Exponent of the open unit norm ball used as the body.
    #[arg(long = "body-p")]
    pub body_p: Order,
    #[arg(long, value_parser = number_list, allow_hyphen_values = true, required_unless_present = "points")]
    pub x: Option<::std::vec::Vec<f64>>,
    /// CSV file of points, one per row.
    #[arg(long, conflicts_with = "x")]
    pub points: Option<PathBuf>,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct SystemArgs {
    /// Matrix CSV, one row per line, no header.
    #[arg(long = "A")]
    pub a: PathBuf,
    /// Right-hand side CSV, a single row or a single column.
    #[arg(long = "b")]
    pub b: PathBuf,
    /// Residual tolerance (default: $RESIDUAL_TOL or 1e-8).
    #[arg(long)]
    pub residual_tol: Option<f64>,
    #[arg(long)]
    pub max_support: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SparseSolveArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SurrogateRankArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    #[arg(long, default_value_t = 0.5)]
    pub s: f64,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub common: Common,
}
