use crate::phase::Regime;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("alpha = {0} is outside the replica-symmetric regime (alpha > -2 required)")]
    OutsideReplicaSymmetric(f64),

    #[error("{what} = {value} is outside its domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("maximizer {index} at u = {u} is degenerate (c = {c}); the Gaussian variance diverges")]
    DegenerateMaximizer { index: usize, u: f64, c: f64 },

    #[error("maximizer index {index} out of range ({count} maximizers)")]
    NoSuchMaximizer { index: usize, count: usize },

    #[error("operation requires regime {expected}, but the parameters are in {found:?}")]
    Regime { expected: &'static str, found: Regime },

    #[error("conditioning window around {center} has zero mass")]
    EmptyWindow { center: f64 },

    #[error("n = {n} not supported: {reason}")]
    Size { n: usize, reason: &'static str },

    #[error("numerical convergence failure: {0}")]
    Convergence(String),

    #[error("insufficient data: {got} samples, at least {need} required")]
    InsufficientData { got: usize, need: usize },

    #[error("invalid configuration field `{field}`: {reason}")]
    Config { field: &'static str, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
