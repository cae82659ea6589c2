//! Command-line arguments.

use clap::{Args, Parser, Subcommand, ValueEnum};
use orthomotion::ortho3d::{MotionKind, RateFunction};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "orthomotion",
    version,
    about = "Orthogonal random motions in three dimensions"
)]
pub struct Cli {
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true, env = "ORTHOMOTION_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Sample paths and report class counts, endpoints or an interior histogram.
    Simulate(SimulateArgs),
    /// Closed-form probabilities of vertices, edges, faces and interior.
    Masses(MassesArgs),
    /// Evaluate an analytic density on a grid.
    Density(DensityArgs),
    /// Monte Carlo suites against the closed forms.
    Verify(VerifyArgs),
    /// Finite-difference residuals and operator identities.
    PdeCheck(PdeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Osm,
    Oum,
    Osdm,
}

impl From<Kind> for MotionKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Osm => MotionKind::Osm,
            Kind::Oum => MotionKind::Oum,
            Kind::Osdm => MotionKind::Osdm,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args, Serialize)]
pub struct Motion {
    #[arg(long, value_enum, default_value = "osm")]
    pub kind: Kind,
    /// Constant switching rate.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub lambda: f64,
    /// Knots of a piecewise-constant rate, starting at 0.
    #[arg(long, value_delimiter = ',', requires = "rate_values", allow_negative_numbers = true)]
    pub rate_knots: Option<Vec<f64>>,
    /// Rate values on `[knot_i, knot_{i+1})`.
    #[arg(long, value_delimiter = ',', requires = "rate_knots", allow_negative_numbers = true)]
    pub rate_values: Option<Vec<f64>>,
    /// Speed.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub c: f64,
    /// Horizon.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub t: f64,
}

impl Motion {
    pub fn rate(&self) -> orthomotion::Result<RateFunction> {
        match (&self.rate_knots, &self.rate_values) {
            (Some(k), Some(v)) => RateFunction::tabulated(k.clone(), v.clone()),
            _ => RateFunction::constant(self.lambda),
        }
    }

    /// The constant rate, or an error for a tabulated one.
    pub fn constant_rate(&self) -> orthomotion::Result<f64> {
        match self.rate()? {
            RateFunction::Constant { lambda } => Ok(lambda),
            RateFunction::Tabulated { .. } => Err(orthomotion::Error::Unsupported(
                "closed-form densities need a constant rate".into(),
            )),
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct Sink {
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Output file; standard output when absent.
    #[arg(long, short)]
    #[serde(skip)]
    pub output: Option<std::path::PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Report {
    Classes,
    Endpoints,
    Histogram,
}

#[derive(Debug, Args, Serialize)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub motion: Motion,
    #[arg(long, default_value_t = 10_000)]
    pub n: u64,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "classes")]
    pub report: Report,
    /// Bins per axis of the interior histogram.
    #[arg(long, default_value_t = 8)]
    pub bins: usize,
    /// Also write every path as one JSON line.
    #[arg(long)]
    #[serde(skip)]
    pub dump: Option<std::path::PathBuf>,
    #[command(flatten)]
    pub sink: Sink,
}

#[derive(Debug, Args, Serialize)]
pub struct MassesArgs {
    #[command(flatten)]
    pub motion: Motion,
    /// Compare with simulated class frequencies.
    #[arg(long, requires = "seed")]
    pub mc: bool,
    #[arg(long, default_value_t = 1_000_000)]
    pub n: u64,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Acceptance band in binomial standard deviations.
    #[arg(long, default_value_t = 3.0)]
    pub sigmas: f64,
    #[command(flatten)]
    pub sink: Sink,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    Telegraph,
    Edge,
    Face,
    Plane,
    Tz,
    JointTxty,
    Planar3,
    ZEqCtz,
    TzEqT,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlanarKind {
    Uniform,
    Sd,
}

#[derive(Debug, Args, Serialize)]
pub struct DensityArgs {
    #[arg(long, value_enum)]
    pub target: Target,
    #[command(flatten)]
    pub motion: Motion,
    /// Points per axis, boundary excluded.
    #[arg(long, default_value_t = 101)]
    pub grid: usize,
    /// Direction rule of the planar three-direction motion.
    #[arg(long, value_enum, default_value = "uniform")]
    pub planar_kind: PlanarKind,
    #[command(flatten)]
    pub sink: Sink,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Masses,
    Telegraph,
    Tz,
    Edge,
    Face,
    Planar3,
    Osdm,
    ZEqCtz,
    TzEqT,
    Kac,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    /// Suites to run; all when absent.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub suite: Vec<Suite>,
    #[command(flatten)]
    pub motion: Motion,
    #[arg(long, default_value_t = 100_000)]
    pub n: u64,
    #[arg(long)]
    pub seed: u64,
    /// Significance level of KS and χ² tests.
    #[arg(long, default_value_t = 0.01)]
    pub alpha: f64,
    #[arg(long, default_value_t = 3.0)]
    pub sigmas: f64,
    /// `λ = c²` in the Kac suite.
    #[arg(long, default_value_t = 400.0)]
    pub kac_scale: f64,
    #[command(flatten)]
    pub sink: Sink,
}

#[derive(Debug, Args, Serialize)]
pub struct PdeArgs {
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub lambda: f64,
    /// Speed used by the operator identities.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub c: f64,
    /// Random test functions per identity.
    #[arg(long, default_value_t = 20)]
    pub functions: usize,
    #[arg(long, default_value_t = 2024)]
    pub seed: u64,
    #[command(flatten)]
    pub sink: Sink,
}
