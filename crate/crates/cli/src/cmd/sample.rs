use std::path::Path;
use std::time::Instant;

use anyhow::{Context, Result};
use edgetri::stats::summarize;
use edgetri::{run_chain, ChainConfig};
use serde_json::json;

use crate::args::{checked_params, SampleArgs};
use crate::output::{metadata, Format, Sink};
use crate::Outcome;

/// Parse and validate a chain config; errors name the offending field.
pub fn load_config(path: &Path) -> Result<ChainConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let config: ChainConfig =
        toml::from_str(&text).with_context(|| format!("invalid chain config {}", path.display()))?;
    checked_params(config.params.alpha, config.params.h).context("params")?;
    config
        .validate()
        .with_context(|| format!("invalid chain config {}", path.display()))?;
    Ok(config)
}

pub fn run(a: SampleArgs) -> Result<Outcome> {
    let config = load_config(&a.config)?;
    let started = Instant::now();
    let trace = run_chain(&config)?;
    let meta = metadata("trace", &config)?;
    if let Ok(s) = summarize(&trace.edge_densities()) {
        eprintln!(
            "n = {}: {} samples, edge density {:.6} ± {:.2e}, tau_int {:.2}, flip rate {:.4}, {:.2?}",
            config.n,
            s.count,
            s.mean,
            s.standard_error,
            s.tau_int,
            trace.stats.flip_rate(),
            started.elapsed()
        );
    }
    let sink = Sink::open(a.output.out.as_deref())?;
    match a.output.format {
        Format::Csv => sink.with_writer(|w| trace.write_csv(w, &meta))?,
        Format::Json => sink.write_json(
            meta,
            json!({
                "stats": trace.stats,
                "sweep": trace.samples.iter().map(|s| s.sweep).collect::<Vec<_>>(),
                "edge_density": trace.edge_densities(),
                "triangle_density": trace.triangle_densities(),
            }),
        )?,
    }
    Ok(Outcome::Pass)
}
