use std::path::PathBuf;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use edgetri::meanfield::DEFAULT_DELTA;
use edgetri::{EnergyScale, ModelParams};
use serde::{Deserialize, Serialize};

use crate::output::Format;

#[derive(Debug, Parser)]
#[command(name = "edgetri", version = crate::output::VERSION, about = "Edge-triangle random graph toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Scan the (α, h) plane and trace the critical curve.
    Phase(PhaseArgs),
    /// Exact mean-field tables at a single n.
    Meanfield(MeanfieldArgs),
    /// Brute-force enumeration of all graphs on n ≤ 7 vertices.
    Enumerate(EnumerateArgs),
    /// Run a Glauber chain described by a TOML config.
    Sample(SampleArgs),
    /// Run verification suites and report verdicts.
    Verify(VerifyArgs),
}

/// Lattice normalization of the mean-field energy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    /// `n²` prefactor with `m = 2k/n²`.
    VertexSquare,
    /// `n(n−1)` prefactor with `m = k/N̄`.
    #[default]
    PairCount,
}

impl From<Scale> for EnergyScale {
    fn from(s: Scale) -> Self {
        match s {
            Scale::VertexSquare => EnergyScale::VertexSquare,
            Scale::PairCount => EnergyScale::PairCount,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OutputArgs {
    /// Output file; stdout when omitted.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ParamArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub h: f64,
}

impl ParamArgs {
    pub fn params(&self) -> Result<ModelParams> {
        checked_params(self.alpha, self.h)
    }
}

/// Reject `α ≤ −2` and non-finite values before any work is done.
pub fn checked_params(alpha: f64, h: f64) -> Result<ModelParams> {
    if !alpha.is_finite() || !h.is_finite() {
        bail!("alpha and h must be finite (got alpha = {alpha}, h = {h})");
    }
    let p = ModelParams::new(alpha, h);
    p.require_replica_symmetric()?;
    Ok(p)
}

pub fn check_n(field: &str, n: usize) -> Result<()> {
    if n < 2 {
        bail!("{field}: n must be at least 2 (got {n})");
    }
    Ok(())
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PhaseArgs {
    #[arg(long, default_value_t = -1.5, allow_hyphen_values = true)]
    pub alpha_min: f64,
    #[arg(long, default_value_t = 8.0, allow_hyphen_values = true)]
    pub alpha_max: f64,
    #[arg(long, default_value_t = 39)]
    pub alpha_steps: usize,
    #[arg(long, default_value_t = -4.0, allow_hyphen_values = true)]
    pub h_min: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub h_max: f64,
    #[arg(long, default_value_t = 41)]
    pub h_steps: usize,
    /// Fixed-point residual tolerance of the root finder.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Points on the traced curve h = q(α).
    #[arg(long, default_value_t = 50)]
    pub curve_points: usize,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MeanfieldTable {
    /// Exact law of the edge density.
    Distribution,
    /// Moment generating function of the scaled fluctuation over a t grid.
    Mgf,
    /// Rate function against the finite-n log-probabilities.
    Rate,
    /// Exact partition function against its Laplace asymptotics.
    Laplace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalingArg {
    /// Critical scaling at the critical point, CLT scaling elsewhere.
    Auto,
    Clt,
    Critical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CenteringArg {
    ExactMean,
    Maximizer,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MeanfieldArgs {
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, value_enum)]
    pub what: MeanfieldTable,
    #[arg(long, value_enum, default_value_t = Scale::PairCount)]
    pub scale: Scale,
    /// Window exponent for the Laplace check.
    #[arg(long, default_value_t = DEFAULT_DELTA)]
    pub delta: f64,
    #[arg(long, default_value_t = -2.0, allow_hyphen_values = true)]
    pub t_min: f64,
    #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
    pub t_max: f64,
    #[arg(long, default_value_t = 41)]
    pub t_steps: usize,
    #[arg(long, value_enum, default_value_t = ScalingArg::Auto)]
    pub scaling: ScalingArg,
    #[arg(long, value_enum, default_value_t = CenteringArg::Maximizer)]
    pub centering: CenteringArg,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    pub params: ParamArgs,
    /// Include the zeros of Z in the fugacity (JSON only).
    #[arg(long)]
    pub zeros: bool,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SampleArgs {
    /// TOML chain config: n, seed, sweeps, [params] alpha/h, and optional
    /// stream, init, burn_in_sweeps, thinning.
    #[arg(long, short)]
    pub config: PathBuf,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Slln,
    Clt,
    Critical,
    Mixture,
    Rate,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    MeanFieldExact,
    Sampler,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    /// Optional TOML file with the same keys as the flags below.
    #[arg(long, short)]
    pub config: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub h: Option<f64>,
    /// Comma-separated graph sizes.
    #[arg(long, value_delimiter = ',')]
    pub n_list: Option<Vec<usize>>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub burn_in_sweeps: Option<u64>,
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long)]
    pub thinning: Option<u64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long, value_enum)]
    pub source: Option<Source>,
    #[arg(long, value_enum)]
    pub scale: Option<Scale>,
    /// Verdicts as JSON to this file (stdout when omitted); the text report
    /// goes to stderr.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}
