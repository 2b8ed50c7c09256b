use anyhow::{bail, Result};
use edgetri::phase::{classify_phase_with, Tolerances};
use edgetri::{critical_curve_h, limiting_variance, ModelParams, Regime, ALPHA_C};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::linspace;
use crate::args::{checked_params, PhaseArgs};
use crate::output::{metadata, Format, Sink};
use crate::Outcome;

#[derive(Debug, Clone, Serialize)]
pub struct PhaseRow {
    pub series: &'static str,
    pub alpha: f64,
    pub h: f64,
    pub regime: Regime,
    pub u_star_1: Option<f64>,
    pub u_star_2: Option<f64>,
    pub free_energy: Option<f64>,
    pub variance: Option<f64>,
}

const HEADER: [&str; 8] = [
    "series",
    "alpha",
    "h",
    "regime",
    "u_star_1",
    "u_star_2",
    "free_energy",
    "variance",
];

fn row(series: &'static str, params: ModelParams, tol: &Tolerances) -> Result<PhaseRow> {
    let p = classify_phase_with(params, tol)?;
    let u = |i: usize| p.maximizers.get(i).map(|m| m.u());
    let variance = match p.regime {
        Regime::Uniqueness => Some(limiting_variance(&p, 0)?),
        _ => None,
    };
    Ok(PhaseRow {
        series,
        alpha: params.alpha,
        h: params.h,
        regime: p.regime,
        u_star_1: u(0),
        u_star_2: u(1),
        free_energy: p.free_energy.is_finite().then_some(p.free_energy),
        variance,
    })
}

fn validate(a: &PhaseArgs) -> Result<()> {
    checked_params(a.alpha_min, a.h_min)?;
    if !(a.alpha_max >= a.alpha_min) || !(a.h_max >= a.h_min) {
        bail!("alpha_max/h_max must not be below alpha_min/h_min");
    }
    if a.alpha_steps == 0 || a.h_steps == 0 {
        bail!("alpha_steps and h_steps must be at least 1");
    }
    if !(a.tol > 0.0) {
        bail!("tol must be positive (got {})", a.tol);
    }
    Ok(())
}

/// Grid rows in α-major order, then the curve from the critical point.
pub fn compute(a: &PhaseArgs) -> Result<(Vec<PhaseRow>, Vec<PhaseRow>)> {
    validate(a)?;
    let tol = Tolerances::with_residual(a.tol);
    let alphas = linspace(a.alpha_min, a.alpha_max, a.alpha_steps);
    let hs = linspace(a.h_min, a.h_max, a.h_steps);
    let points: Vec<ModelParams> = alphas
        .iter()
        .flat_map(|&al| hs.iter().map(move |&h| ModelParams::new(al, h)))
        .collect();
    let grid = points
        .par_iter()
        .map(|&p| row("grid", p, &tol))
        .collect::<Result<Vec<_>>>()?;

    let mut curve = Vec::new();
    if a.alpha_max > ALPHA_C && a.curve_points > 0 {
        let start = a.alpha_min.max(ALPHA_C);
        let mut alphas = linspace(start, a.alpha_max, a.curve_points);
        if start == ALPHA_C {
            alphas.remove(0);
            curve.push(row("curve", ModelParams::critical(), &tol)?);
        }
        let rest = alphas
            .par_iter()
            .map(|&al| row("curve", ModelParams::new(al, critical_curve_h(al, a.tol.min(1e-12))?), &tol))
            .collect::<Result<Vec<_>>>()?;
        curve.extend(rest);
    }
    Ok((grid, curve))
}

pub fn run(a: PhaseArgs) -> Result<Outcome> {
    let (grid, curve) = compute(&a)?;
    let meta = metadata("phase", &a)?;
    let sink = Sink::open(a.output.out.as_deref())?;
    match a.output.format {
        Format::Csv => {
            let rows: Vec<&PhaseRow> = grid.iter().chain(&curve).collect();
            sink.write_csv(&meta, &HEADER, &rows)?;
        }
        Format::Json => sink.write_json(meta, json!({ "grid": grid, "curve": curve }))?,
    }
    Ok(Outcome::Pass)
}
