use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// High-dimensional random walks, convex-hull absorption and cone escape
/// experiments. Angles are in radians.
#[derive(Debug, Parser)]
#[command(name = "hullwalk", version, about)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Root seed; every trial derives its own stream from it.
    #[arg(long, global = true, env = "HULLWALK_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (0 = all cores). Reports do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<std::path::PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Record wall-clock time in the report (breaks byte identity).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate one walk; CSV output is the path as `t,x1,...,xn`.
    Simulate(WalkArgs),
    /// Estimate the probability that the origin lies in the walk's hull.
    Absorb(AbsorbArgs),
    /// Smallest number of points reaching a target absorption probability.
    Threshold(ThresholdArgs),
    /// Covering time of the fixed-angle spherical walk.
    Cover(CoverArgs),
    /// Gaussian widths of a cone and its polar.
    Width(WidthArgs),
    /// Escape frequency of Gaussian matrices and the negative-spread property.
    Escape(EscapeArgs),
    /// Direction positive along a Brownian path, by block refinement.
    Witness(WitnessArgs),
    /// Run a suite of invariant checks.
    Check(CheckArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelArg {
    Bm,
    Zn,
    Sphere,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GridArg {
    Uniform,
    Geometric,
    Poisson,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct WalkArgs {
    #[arg(long, value_enum, default_value_t = ModelArg::Bm)]
    pub model: ModelArg,
    #[arg(long, value_enum, default_value_t = GridArg::Uniform)]
    pub grid: GridArg,
    /// Ratio K of the geometric grid.
    #[arg(long, default_value_t = 2.0)]
    pub ratio: f64,
    /// Step angle of the spherical walk.
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_3)]
    pub theta: f64,
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Number of points (the intensity for the Poisson grid).
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct AbsorbArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub walk: WalkArgs,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ThresholdArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub walk: WalkArgs,
    #[arg(long, default_value_t = 0.5)]
    pub target: f64,
    /// Trials per probe.
    #[arg(long, default_value_t = 400)]
    pub trials: usize,
    #[arg(long, default_value_t = 1 << 16)]
    pub max_steps: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CoverArgs {
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_3)]
    pub theta: f64,
    #[arg(long, default_value_t = 5)]
    pub n: usize,
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    /// Steps after which a trial is censored.
    #[arg(long, default_value_t = 100_000)]
    pub cap: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ConeArg {
    /// The nonnegative orthant (F = I).
    Orthant,
    /// Prefix matrix of Brownian motion on a geometric grid.
    Bm,
    /// Prefix matrix of the spherical walk.
    Sphere,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct WidthArgs {
    #[arg(long, value_enum, default_value_t = ConeArg::Orthant)]
    pub cone: ConeArg,
    /// Ambient dimension N of the cone.
    #[arg(long, default_value_t = 20)]
    pub dim: usize,
    #[arg(long, default_value_t = 4.0)]
    pub ratio: f64,
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_3)]
    pub theta: f64,
    /// Walk dimension n entering the spherical prefix matrix.
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RowArg {
    Gaussian,
    /// Scaled lattice increments √(n/m)·W(m) with m = n⁴.
    Zn,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EscapeArgs {
    #[arg(long, value_enum, default_value_t = RowArg::Gaussian)]
    pub rows_kind: RowArg,
    /// Number of rows N.
    #[arg(long, default_value_t = 40)]
    pub rows: usize,
    #[arg(long, default_value_t = 5)]
    pub n: usize,
    #[arg(long, default_value_t = 1.0)]
    pub tau: f64,
    /// Random directions on top of the signed axes.
    #[arg(long, default_value_t = 50)]
    pub directions: usize,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct WitnessArgs {
    #[arg(long, default_value_t = 64)]
    pub n: usize,
    #[arg(long, default_value_t = 4)]
    pub blocks: usize,
    #[arg(long, default_value_t = 0.05)]
    pub cf: f64,
    #[arg(long, default_value_t = 0.15)]
    pub ch: f64,
    #[arg(long, default_value_t = 2)]
    pub outer: u32,
    #[arg(long, default_value_t = 2)]
    pub inner: usize,
    /// Coordinates reserved for the initial direction.
    #[arg(long, default_value_t = 48)]
    pub initial_cell: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Hull,
    Moreau,
    Budget,
    Condition,
    Series,
    Truncated,
    Bridge,
    Ubar,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CheckArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    #[arg(long, default_value_t = 500)]
    pub trials: usize,
}
