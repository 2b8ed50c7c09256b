use anyhow::{bail, Context, Result};
use edgetri::meanfield::{abs_deviation_scaled, scaled_fluctuation_log_mgf, MAX_EXACT_N};
use edgetri::{rate_function, Centering, ExactDistribution, MeanFieldModel, Regime, Scaling};
use rayon::prelude::*;
use serde_json::{json, Value};

use super::linspace;
use crate::args::{check_n, CenteringArg, MeanfieldArgs, MeanfieldTable, ScalingArg};
use crate::output::{metadata, Format, Sink};
use crate::Outcome;

fn scaling(a: &MeanfieldArgs, dist: &ExactDistribution) -> Scaling {
    match a.scaling {
        ScalingArg::Clt => Scaling::Clt,
        ScalingArg::Critical => Scaling::Critical,
        ScalingArg::Auto if dist.portrait.regime == Regime::CriticalPoint => Scaling::Critical,
        ScalingArg::Auto => Scaling::Clt,
    }
}

/// Scaled mean deviation and its limit, when the regime defines them.
fn deviation_summary(dist: &ExactDistribution) -> Value {
    match abs_deviation_scaled(dist, None) {
        Ok(d) => json!({ "scaled_abs_deviation": d }),
        Err(_) => json!({ "scaled_abs_deviation": null }),
    }
}

type Table = (Vec<&'static str>, Vec<Vec<f64>>, Value);

fn distribution(dist: &ExactDistribution) -> Table {
    let grid = dist.grid();
    let rows = (0..grid.len())
        .map(|k| vec![k as f64, grid.value(k), dist.probabilities[k], dist.log_probability(k)])
        .collect();
    let summary = json!({
        "log_partition": dist.log_partition,
        "mean": dist.mean(),
        "variance": dist.variance(),
    });
    (vec!["k", "m", "probability", "log_probability"], rows, summary)
}

fn mgf(a: &MeanfieldArgs, dist: &ExactDistribution) -> Result<Table> {
    if a.t_steps == 0 || !(a.t_max >= a.t_min) {
        bail!("t grid: need t_steps ≥ 1 and t_max ≥ t_min");
    }
    let sc = scaling(a, dist);
    let ce = match a.centering {
        CenteringArg::ExactMean => Centering::ExactMean,
        CenteringArg::Maximizer => Centering::Maximizer,
    };
    let rows = linspace(a.t_min, a.t_max, a.t_steps)
        .par_iter()
        .map(|&t| {
            let l = scaled_fluctuation_log_mgf(dist, t, sc, ce)?;
            Ok(vec![t, l.exp(), l])
        })
        .collect::<edgetri::Result<Vec<_>>>()?;
    let summary = json!({ "scaling": sc, "centering": ce });
    Ok((vec!["t", "mgf", "log_mgf"], rows, summary))
}

fn rate(dist: &ExactDistribution) -> Result<Table> {
    let grid = dist.grid();
    let top = dist.log_weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let n_sq = dist.model.n_sq();
    let params = dist.model.params;
    let rows = (0..grid.len())
        .map(|k| {
            let m = grid.value(k);
            Ok(vec![k as f64, m, rate_function(m.min(1.0), params)?, (top - dist.log_weights[k]) / n_sq])
        })
        .collect::<edgetri::Result<Vec<_>>>()?;
    Ok((vec!["k", "m", "rate", "finite_n_rate"], rows, deviation_summary(dist)))
}

fn laplace(a: &MeanfieldArgs, model: MeanFieldModel) -> Result<Table> {
    let check = edgetri::laplace_check(model, a.delta)?;
    let rows = check
        .terms
        .iter()
        .enumerate()
        .map(|(i, t)| {
            vec![
                a.n as f64,
                check.log_partition_exact,
                check.log_partition_laplace,
                check.log_partition_windows,
                check.discrepancy,
                i as f64,
                t.center,
                t.log_d_lattice,
                t.d_normalized,
                t.d_limit,
            ]
        })
        .collect();
    let header = vec![
        "n",
        "log_partition_exact",
        "log_partition_laplace",
        "log_partition_windows",
        "discrepancy",
        "term",
        "center",
        "log_d_lattice",
        "d_normalized",
        "d_limit",
    ];
    let summary = json!({ "discrepancy": check.discrepancy, "terms": check.terms });
    Ok((header, rows, summary))
}

pub fn run(a: MeanfieldArgs) -> Result<Outcome> {
    check_n("n", a.n)?;
    if a.n > MAX_EXACT_N {
        bail!("n: at most {MAX_EXACT_N} for exact tables (got {})", a.n);
    }
    let params = a.params.params()?;
    let model = MeanFieldModel::new(a.n, params).with_scale(a.scale.into());
    let (header, rows, summary) = match a.what {
        MeanfieldTable::Laplace => laplace(&a, model)?,
        what => {
            let dist = model.distribution().context("exact distribution")?;
            match what {
                MeanfieldTable::Distribution => distribution(&dist),
                MeanfieldTable::Mgf => mgf(&a, &dist)?,
                _ => rate(&dist)?,
            }
        }
    };
    let mut meta = metadata("meanfield", &a)?;
    meta["summary"] = summary;
    let sink = Sink::open(a.output.out.as_deref())?;
    match a.output.format {
        Format::Csv => sink.write_csv(&meta, &header, &rows)?,
        Format::Json => {
            let objs: Vec<Value> = rows
                .iter()
                .map(|r| Value::Object(header.iter().map(|h| h.to_string()).zip(r.iter().map(|&x| json!(x))).collect()))
                .collect();
            sink.write_json(meta, json!({ "rows": objs }))?
        }
    }
    Ok(Outcome::Pass)
}
