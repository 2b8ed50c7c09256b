//! Exact finite-n computations for the mean-field edge-triangle model, whose
//! edge count `S` has law `P(S = k) ∝ C(N̄, k) · exp(E · (α/6 m³ + h/2 m))`
//! with `N̄ = n(n−1)/2` and `m = 2k/E` for an energy scale `E`.
//!
//! Two energy scales are supported. [`EnergyScale::VertexSquare`] uses
//! `E = n²`, so densities live on `{0, 2/n², …, 1 − 1/n}`. Its lattice does not
//! reach 1 and the binomial entropy then carries a first-order tilt of
//! `(n/2) ln(1 − m)` relative to the limiting objective, which shifts scaled
//! fluctuation statistics by `O(1)`. [`EnergyScale::PairCount`] uses
//! `E = n(n−1) = 2N̄`, so `m = k/N̄` covers `[0, 1]` and the exact law matches
//! the limiting objective without the tilt. Fluctuation scalings use the
//! effective size `√E` in place of `n`.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{log_binomial, log_sum_exp, CompensatedSum};
use crate::phase::{
    classify_phase_with, ModelParams, PhasePortrait, Regime, Tolerances, CRITICAL_QUARTIC,
};

/// Default window exponent for conditioning and Laplace windows.
pub const DEFAULT_DELTA: f64 = 0.25;
/// Practical ceiling for exact sums (about 2·10⁸ terms).
pub const MAX_EXACT_N: usize = 20_000;

pub const GAMMA_QUARTER: f64 = 3.625_609_908_221_908;
pub const GAMMA_THREE_QUARTERS: f64 = 1.225_416_702_465_177_6;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum EnergyScale {
    #[default]
    VertexSquare,
    PairCount,
}

impl EnergyScale {
    /// The energy prefactor: `n²` or `n(n−1)`.
    pub fn n_sq(self, n: usize) -> f64 {
        let n = n as f64;
        match self {
            EnergyScale::VertexSquare => n * n,
            EnergyScale::PairCount => n * (n - 1.0),
        }
    }

    /// Effective size `√(n_sq)` used in fluctuation scalings.
    pub fn size(self, n: usize) -> f64 {
        self.n_sq(n).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeDensityGrid {
    pub n: usize,
    pub scale: EnergyScale,
}

impl EdgeDensityGrid {
    pub fn pairs(&self) -> u64 {
        let n = self.n as u64;
        n * (n - 1) / 2
    }

    pub fn len(&self) -> usize {
        self.pairs() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `m_k = 2k / n_sq`.
    pub fn value(&self, k: usize) -> f64 {
        2.0 * k as f64 / self.scale.n_sq(self.n)
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.value(k)).collect()
    }

    pub fn spacing(&self) -> f64 {
        2.0 / self.scale.n_sq(self.n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanFieldModel {
    pub n: usize,
    pub params: ModelParams,
    pub scale: EnergyScale,
}

impl MeanFieldModel {
    pub fn new(n: usize, params: ModelParams) -> Self {
        Self {
            n,
            params,
            scale: EnergyScale::VertexSquare,
        }
    }

    pub fn with_scale(mut self, scale: EnergyScale) -> Self {
        self.scale = scale;
        self
    }

    pub fn grid(&self) -> EdgeDensityGrid {
        EdgeDensityGrid {
            n: self.n,
            scale: self.scale,
        }
    }

    pub fn n_sq(&self) -> f64 {
        self.scale.n_sq(self.n)
    }

    pub fn size(&self) -> f64 {
        self.scale.size(self.n)
    }

    pub fn distribution(&self) -> Result<ExactDistribution> {
        ExactDistribution::compute(*self)
    }
}

/// Index range `lo..=hi` of grid points with `|m − center| ≤ radius`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionalWindow {
    pub center: f64,
    pub delta: f64,
    pub radius: f64,
    pub lo: usize,
    pub hi: usize,
}

impl ConditionalWindow {
    /// Window of radius `size^{−δ}` around `center`.
    pub fn new(grid: &EdgeDensityGrid, center: f64, delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::Domain {
                what: "delta",
                value: delta,
                domain: "(0, 1)",
            });
        }
        let radius = grid.scale.size(grid.n).powf(-delta);
        Self::with_radius(grid, center, radius, delta)
    }

    /// Window of explicit `radius` around `center`; `delta` is recorded as given.
    pub fn with_radius(grid: &EdgeDensityGrid, center: f64, radius: f64, delta: f64) -> Result<Self> {
        let step = grid.spacing();
        let last = grid.len() - 1;
        // Small slack so that lattice points exactly on the boundary count.
        let slack = 1e-12 * step;
        let lo = ((center - radius - slack) / step).ceil().max(0.0);
        let hi = ((center + radius + slack) / step).floor().min(last as f64);
        if lo > hi {
            return Err(Error::EmptyWindow { center });
        }
        Ok(Self {
            center,
            delta,
            radius,
            lo: lo as usize,
            hi: hi as usize,
        })
    }

    /// Window around maximizer `which` of the model's phase portrait. At the
    /// critical point the exponent must lie in `(0, 3/8)`.
    pub fn around_maximizer(dist: &ExactDistribution, which: usize, delta: f64) -> Result<Self> {
        let portrait = &dist.portrait;
        if portrait.regime == Regime::CriticalPoint && delta >= 0.375 {
            return Err(Error::Domain {
                what: "delta",
                value: delta,
                domain: "(0, 3/8) at the critical point",
            });
        }
        let center = portrait.maximizer(which)?.u();
        Self::new(&dist.grid(), center, delta)
    }

    /// The whole grid.
    pub fn full(grid: &EdgeDensityGrid) -> Self {
        Self {
            center: 0.5,
            delta: 0.0,
            radius: f64::INFINITY,
            lo: 0,
            hi: grid.len() - 1,
        }
    }

    pub fn contains(&self, k: usize) -> bool {
        self.lo <= k && k <= self.hi
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExactDistribution {
    pub model: MeanFieldModel,
    pub portrait: PhasePortrait,
    pub log_weights: Vec<f64>,
    pub log_partition: f64,
    pub probabilities: Vec<f64>,
    /// Set when this law is conditioned on a window.
    pub window: Option<ConditionalWindow>,
}

fn check_size(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Size {
            n,
            reason: "at least two vertices are required",
        });
    }
    if n > MAX_EXACT_N {
        return Err(Error::Size {
            n,
            reason: "exact sums are limited to n ≤ 20000",
        });
    }
    Ok(())
}

impl ExactDistribution {
    pub fn compute(model: MeanFieldModel) -> Result<Self> {
        check_size(model.n)?;
        model.params.require_replica_symmetric()?;
        let portrait = classify_phase_with(model.params, &Tolerances::default())?;
        let grid = model.grid();
        let pairs = grid.pairs();
        let n_sq = model.n_sq();
        let ModelParams { alpha, h } = model.params;
        let log_weights: Vec<f64> = (0..grid.len())
            .into_par_iter()
            .map(|k| {
                let m = grid.value(k);
                let lb = log_binomial(pairs, k as u64).expect("k within range");
                lb + n_sq * (alpha / 6.0 * m * m * m + h / 2.0 * m)
            })
            .collect();
        Ok(Self::from_log_weights(model, portrait, log_weights, None))
    }

    fn from_log_weights(
        model: MeanFieldModel,
        portrait: PhasePortrait,
        log_weights: Vec<f64>,
        window: Option<ConditionalWindow>,
    ) -> Self {
        // `ln Z` is of order n²·f and its last ulp alone is worth ~1e-10 of
        // total mass at n in the thousands, so probabilities are normalized
        // by an explicit sum rather than through `ln Z`.
        let shift = log_sum_exp(&log_weights);
        let unnormalized: Vec<f64> = log_weights.par_iter().map(|&w| (w - shift).exp()).collect();
        let total: CompensatedSum = unnormalized.iter().copied().collect();
        let total = total.value();
        let log_partition = shift + total.ln();
        let probabilities = unnormalized.into_par_iter().map(|p| p / total).collect();
        Self {
            model,
            portrait,
            log_weights,
            log_partition,
            probabilities,
            window,
        }
    }

    pub fn grid(&self) -> EdgeDensityGrid {
        self.model.grid()
    }

    pub fn log_probability(&self, k: usize) -> f64 {
        self.log_weights[k] - self.log_partition
    }

    /// `E[f(m)]` with compensated summation.
    pub fn expect<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        let grid = self.grid();
        let s: CompensatedSum = self
            .probabilities
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 0.0)
            .map(|(k, &p)| p * f(grid.value(k)))
            .collect();
        s.value()
    }

    pub fn mean(&self) -> f64 {
        self.expect(|m| m)
    }

    pub fn variance(&self) -> f64 {
        let mu = self.mean();
        self.expect(|m| (m - mu) * (m - mu))
    }

    /// Variance of `size·(m − E m)/√2`, the quantity whose limit is the
    /// Gaussian fluctuation variance.
    pub fn clt_variance(&self) -> f64 {
        self.model.n_sq() * self.variance() / 2.0
    }

    /// Total probability of the window.
    pub fn window_mass(&self, window: &ConditionalWindow) -> f64 {
        let s: CompensatedSum = self.probabilities[window.lo..=window.hi].iter().copied().collect();
        s.value()
    }

    /// Total probability outside every given window.
    pub fn complement_mass(&self, windows: &[ConditionalWindow]) -> f64 {
        let s: CompensatedSum = self
            .probabilities
            .iter()
            .enumerate()
            .filter(|(k, _)| !windows.iter().any(|w| w.contains(*k)))
            .map(|(_, &p)| p)
            .collect();
        s.value()
    }

    /// Total probability of the window, in log space.
    pub fn window_log_mass(&self, window: &ConditionalWindow) -> f64 {
        log_sum_exp(&self.log_weights[window.lo..=window.hi]) - self.log_partition
    }

    /// Log probability of lying outside every given window.
    pub fn complement_log_mass(&self, windows: &[ConditionalWindow]) -> f64 {
        let outside: Vec<f64> = self
            .log_weights
            .iter()
            .enumerate()
            .filter(|(k, _)| !windows.iter().any(|w| w.contains(*k)))
            .map(|(_, &w)| w)
            .collect();
        log_sum_exp(&outside) - self.log_partition
    }

    /// Maximizer the fluctuations are centred at: the window centre for a
    /// conditional law, otherwise the unique maximizer.
    pub fn center(&self) -> Result<f64> {
        match &self.window {
            Some(w) if w.radius.is_finite() => Ok(w.center),
            _ => self.portrait.u_star(),
        }
    }

    /// Whether the fluctuation centre is the critical point maximizer.
    fn centred_at_critical(&self) -> bool {
        self.portrait.regime == Regime::CriticalPoint
            && self
                .center()
                .is_ok_and(|c| (c - self.portrait.maximizers[0].u()).abs() < 1e-12)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["k", "m", "log_weight", "probability"])?;
        let grid = self.grid();
        for (k, (&lw, &p)) in self.log_weights.iter().zip(&self.probabilities).enumerate() {
            w.serialize((k, grid.value(k), lw, p))?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn exact_distribution(n: usize, params: ModelParams) -> Result<ExactDistribution> {
    MeanFieldModel::new(n, params).distribution()
}

pub fn mean_edge_density(n: usize, params: ModelParams) -> Result<f64> {
    Ok(exact_distribution(n, params)?.mean())
}

/// Renormalize `dist` to the window; zero probability outside.
pub fn conditional_distribution(
    dist: &ExactDistribution,
    window: &ConditionalWindow,
) -> Result<ExactDistribution> {
    let log_weights: Vec<f64> = dist
        .log_weights
        .iter()
        .enumerate()
        .map(|(k, &w)| if window.contains(k) { w } else { f64::NEG_INFINITY })
        .collect();
    if log_sum_exp(&log_weights) == f64::NEG_INFINITY {
        return Err(Error::EmptyWindow {
            center: window.center,
        });
    }
    Ok(ExactDistribution::from_log_weights(
        dist.model,
        dist.portrait.clone(),
        log_weights,
        Some(*window),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scaling {
    /// `size·(m − c)/√2`.
    Clt,
    /// `√size·(m − c)`.
    Critical,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Centering {
    ExactMean,
    Maximizer,
}

/// Scaled fluctuation values at every grid point.
fn scaled_values(dist: &ExactDistribution, scaling: Scaling, centering: Centering) -> Result<Vec<f64>> {
    let center = match centering {
        Centering::ExactMean => dist.mean(),
        Centering::Maximizer => dist.center()?,
    };
    let factor = match scaling {
        Scaling::Clt => dist.model.size() / std::f64::consts::SQRT_2,
        Scaling::Critical => dist.model.size().sqrt(),
    };
    let grid = dist.grid();
    Ok((0..grid.len()).map(|k| factor * (grid.value(k) - center)).collect())
}

/// `ln E[exp(t X)]` for the scaled fluctuation `X`.
pub fn scaled_fluctuation_log_mgf(
    dist: &ExactDistribution,
    t: f64,
    scaling: Scaling,
    centering: Centering,
) -> Result<f64> {
    if t == 0.0 {
        return Ok(0.0);
    }
    let xs = scaled_values(dist, scaling, centering)?;
    let terms: Vec<f64> = dist
        .log_weights
        .iter()
        .zip(&xs)
        .map(|(&w, &x)| w + t * x)
        .collect();
    Ok(log_sum_exp(&terms) - dist.log_partition)
}

pub fn scaled_fluctuation_mgf(
    dist: &ExactDistribution,
    t: f64,
    scaling: Scaling,
    centering: Centering,
) -> Result<f64> {
    Ok(scaled_fluctuation_log_mgf(dist, t, scaling, centering)?.exp())
}

/// Central moments 1..=4 of the scaled fluctuation (first is the mean).
pub fn scaled_moments(
    dist: &ExactDistribution,
    scaling: Scaling,
    centering: Centering,
) -> Result<[f64; 4]> {
    let xs = scaled_values(dist, scaling, centering)?;
    let mut out = [0.0; 4];
    for (p_idx, slot) in out.iter_mut().enumerate() {
        let power = p_idx as i32 + 1;
        let s: CompensatedSum = dist
            .probabilities
            .iter()
            .zip(&xs)
            .map(|(&p, &x)| p * x.powi(power))
            .collect();
        *slot = s.value();
    }
    Ok(out)
}

/// `E[X⁴]/E[X²]²` of the fluctuation about the exact mean.
pub fn fluctuation_kurtosis(dist: &ExactDistribution) -> f64 {
    let mu = dist.mean();
    let m2 = dist.expect(|m| (m - mu).powi(2));
    let m4 = dist.expect(|m| (m - mu).powi(4));
    m4 / (m2 * m2)
}

/// `size·E|m − u*|`, or `√size·E|m − u*|` when centred at the critical point.
/// On the critical curve a window selecting one maximizer is required.
pub fn abs_deviation_scaled(
    dist: &ExactDistribution,
    window: Option<&ConditionalWindow>,
) -> Result<f64> {
    let conditioned;
    let law = match window {
        Some(w) => {
            conditioned = conditional_distribution(dist, w)?;
            &conditioned
        }
        None => {
            if dist.window.is_none() && dist.portrait.regime == Regime::OnCriticalCurve {
                return Err(Error::Regime {
                    expected: "Uniqueness or CriticalPoint (or a conditioning window)",
                    found: dist.portrait.regime,
                });
            }
            dist
        }
    };
    let center = law.center()?;
    let factor = if law.centred_at_critical() {
        law.model.size().sqrt()
    } else {
        law.model.size()
    };
    Ok(factor * law.expect(|m| (m - center).abs()))
}

/// Limits of the scaled fluctuations.
pub mod limits {
    use super::{GAMMA_QUARTER, GAMMA_THREE_QUARTERS};
    use std::f64::consts::PI;

    /// `E|Y|` for density `∝ exp(−c y²)`.
    pub fn gaussian_abs_mean(c: f64) -> f64 {
        1.0 / (PI * c).sqrt()
    }

    /// `E|Y|` for density `∝ exp(−a y⁴)`.
    pub fn quartic_abs_mean(a: f64) -> f64 {
        PI.sqrt() * a.powf(-0.25) / GAMMA_QUARTER
    }

    /// `E[Y²]` for density `∝ exp(−a y⁴)`.
    pub fn quartic_second_moment(a: f64) -> f64 {
        GAMMA_THREE_QUARTERS / (GAMMA_QUARTER * a.sqrt())
    }

    /// `E[Y⁴]/E[Y²]²` for density `∝ exp(−a y⁴)`; independent of `a`.
    pub fn quartic_kurtosis() -> f64 {
        let g54 = GAMMA_QUARTER / 4.0;
        g54 * GAMMA_QUARTER / (GAMMA_THREE_QUARTERS * GAMMA_THREE_QUARTERS)
    }

    /// `∫ exp(−a y⁴) dy = 2 Γ(5/4) a^{−1/4}`.
    pub fn quartic_normalizer(a: f64) -> f64 {
        0.5 * GAMMA_QUARTER * a.powf(-0.25)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaplaceTerm {
    pub center: f64,
    pub lo: usize,
    pub hi: usize,
    /// `size·√π·Σ_window exp(log_w − n_sq·f)`: the window sum in the
    /// normalization of the asymptotic formula.
    pub d_lattice: f64,
    /// `ln d_lattice`; stays finite when `d_lattice` underflows.
    pub log_d_lattice: f64,
    /// `d_lattice` times the lattice spacing in the fluctuation variable;
    /// converges to `d_limit`.
    pub d_normalized: f64,
    pub d_limit: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaplaceCheck {
    pub model: MeanFieldModel,
    pub delta: f64,
    pub log_partition_exact: f64,
    /// `n_sq·f + ln Σ D_i − ln(size·√π)` with the limiting constants `D_i`
    /// rescaled to the lattice.
    pub log_partition_laplace: f64,
    /// Same formula with the exact window sums in place of the limits.
    pub log_partition_windows: f64,
    pub discrepancy: f64,
    pub terms: Vec<LaplaceTerm>,
}

/// Compare the exact partition function with its Laplace asymptotics.
///
/// Windows have radius `size^{−(1−δ)}` around a nondegenerate maximizer and
/// `size^{−(1/2−δ)}` around the critical point.
pub fn laplace_check(model: MeanFieldModel, delta: f64) -> Result<LaplaceCheck> {
    if model.n < 50 {
        return Err(Error::Size {
            n: model.n,
            reason: "Laplace asymptotics need n ≥ 50",
        });
    }
    let dist = model.distribution()?;
    let critical = dist.portrait.regime == Regime::CriticalPoint;
    if !(delta > 0.0 && delta < if critical { 0.375 } else { 1.0 }) {
        return Err(Error::Domain {
            what: "delta",
            value: delta,
            domain: if critical { "(0, 3/8)" } else { "(0, 1)" },
        });
    }
    let size = model.size();
    let n_sq = model.n_sq();
    let f = dist.portrait.free_energy;
    let grid = dist.grid();
    let sqrt_pi = std::f64::consts::PI.sqrt();
    let alpha = model.params.alpha;

    let mut terms = Vec::with_capacity(dist.portrait.maximizers.len());
    for m in &dist.portrait.maximizers {
        let u = m.u();
        let (radius, spacing, d_limit) = if critical {
            let limit = 2.0 * (GAMMA_QUARTER / 4.0) * CRITICAL_QUARTIC.powf(-0.25)
                / (u * (1.0 - u)).sqrt();
            (size.powf(-(0.5 - delta)), 2.0 / size.powf(1.5), limit)
        } else {
            let limit = 2.0 * (std::f64::consts::PI / (1.0 - 2.0 * alpha * u * u * (1.0 - u))).sqrt();
            (size.powf(-(1.0 - delta)), 2.0 / size, limit)
        };
        let w = ConditionalWindow::with_radius(&grid, u, radius, delta)?;
        let shifted: Vec<f64> = dist.log_weights[w.lo..=w.hi]
            .iter()
            .map(|&lw| lw - n_sq * f)
            .collect();
        let log_d_lattice = (size * sqrt_pi).ln() + log_sum_exp(&shifted);
        let d_lattice = log_d_lattice.exp();
        terms.push(LaplaceTerm {
            center: u,
            lo: w.lo,
            hi: w.hi,
            d_lattice,
            log_d_lattice,
            d_normalized: d_lattice * spacing,
            d_limit,
        });
    }
    // Number of lattice points per unit of the fluctuation variable.
    let lattice_factor = if critical { size.powf(1.5) / 2.0 } else { size / 2.0 };
    let sum_limit: f64 = terms.iter().map(|t| t.d_limit * lattice_factor).sum();
    let log_windows: Vec<f64> = terms.iter().map(|t| t.log_d_lattice).collect();
    let base = n_sq * f - (size * sqrt_pi).ln();
    let log_partition_laplace = base + sum_limit.ln();
    Ok(LaplaceCheck {
        model,
        delta,
        log_partition_exact: dist.log_partition,
        log_partition_laplace,
        log_partition_windows: base + log_sum_exp(&log_windows),
        discrepancy: dist.log_partition - log_partition_laplace,
        terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::logistic;
    use crate::phase::{critical_curve_h, ALPHA_C, H_C};

    fn er(h: f64) -> ModelParams {
        ModelParams::new(0.0, h)
    }

    #[test]
    fn three_vertex_uniform_law() {
        let d = exact_distribution(3, er(0.0)).unwrap();
        let expect = [0.125, 0.375, 0.375, 0.125];
        for (p, e) in d.probabilities.iter().zip(expect) {
            assert!((p - e).abs() < 1e-15);
        }
        assert!((d.log_partition - 8f64.ln()).abs() < 1e-14);
        assert_eq!(d.grid().values(), vec![0.0, 2.0 / 9.0, 4.0 / 9.0, 6.0 / 9.0]);
        assert!((d.mean() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn three_vertex_with_triangle_weight() {
        let d = exact_distribution(3, ModelParams::new(3.0, 0.0)).unwrap();
        let direct: f64 = (0..4)
            .map(|k| {
                let m = 2.0 * k as f64 / 9.0;
                [1.0, 3.0, 3.0, 1.0][k] * (9.0 * m * m * m / 2.0).exp()
            })
            .sum();
        assert!((d.log_partition - direct.ln()).abs() < 1e-12);
    }

    #[test]
    fn grid_ends() {
        let g = EdgeDensityGrid {
            n: 10,
            scale: EnergyScale::VertexSquare,
        };
        assert_eq!(g.len(), 46);
        assert!((g.value(45) - 0.9).abs() < 1e-15);
        let g = EdgeDensityGrid {
            n: 10,
            scale: EnergyScale::PairCount,
        };
        assert!((g.value(45) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn size_errors() {
        assert!(matches!(exact_distribution(1, er(0.0)), Err(Error::Size { .. })));
        assert!(exact_distribution(5, ModelParams::new(-2.5, 0.0)).is_err());
    }

    #[test]
    fn erdos_renyi_mean_on_both_scales() {
        for h in [-1.0, 0.0, 0.7] {
            for n in [3usize, 17, 200] {
                let d = exact_distribution(n, er(h)).unwrap();
                let want = (1.0 - 1.0 / n as f64) * logistic(h);
                assert!((d.mean() - want).abs() < 1e-11, "n={n}, h={h}: {}", d.mean() - want);
                let p = MeanFieldModel::new(n, er(h))
                    .with_scale(EnergyScale::PairCount)
                    .distribution()
                    .unwrap();
                assert!((p.mean() - logistic(h)).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn full_window_is_identity() {
        let d = exact_distribution(30, ModelParams::new(1.0, -0.5)).unwrap();
        let w = ConditionalWindow::full(&d.grid());
        let c = conditional_distribution(&d, &w).unwrap();
        for (a, b) in d.probabilities.iter().zip(&c.probabilities) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn conditioning_rescales_inside_window() {
        let d = exact_distribution(40, er(0.0)).unwrap();
        let w = ConditionalWindow::new(&d.grid(), 0.5, 0.5).unwrap();
        let mass = d.window_log_mass(&w).exp();
        let c = conditional_distribution(&d, &w).unwrap();
        for k in 0..d.grid().len() {
            if w.contains(k) {
                assert!((c.probabilities[k] - d.probabilities[k] / mass).abs() < 1e-13);
            } else {
                assert_eq!(c.probabilities[k], 0.0);
            }
        }
        let total: f64 = c.probabilities.iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn empty_window_errors() {
        let d = exact_distribution(5, er(0.0)).unwrap();
        assert!(matches!(
            ConditionalWindow::new(&d.grid(), 2.0, 0.9),
            Err(Error::EmptyWindow { .. })
        ));
    }

    #[test]
    fn critical_window_exponent_is_restricted() {
        let d = exact_distribution(60, ModelParams::new(ALPHA_C, H_C)).unwrap();
        assert!(ConditionalWindow::around_maximizer(&d, 0, 0.25).is_ok());
        assert!(ConditionalWindow::around_maximizer(&d, 0, 0.4).is_err());
    }

    #[test]
    fn mgf_at_zero_is_one() {
        let d = exact_distribution(50, ModelParams::new(1.0, 0.0)).unwrap();
        for s in [Scaling::Clt, Scaling::Critical] {
            assert_eq!(scaled_fluctuation_mgf(&d, 0.0, s, Centering::ExactMean).unwrap(), 1.0);
        }
    }

    #[test]
    fn abs_deviation_toy() {
        // 3·E|m − 1/2| with m ∈ {0, 2/9, 4/9, 2/3} and weights (1, 3, 3, 1)/8.
        let direct = 3.0 * (0.5 + 3.0 * 5.0 / 18.0 + 3.0 / 18.0 + 1.0 / 6.0) / 8.0;
        let d = exact_distribution(3, er(0.0)).unwrap();
        assert!((abs_deviation_scaled(&d, None).unwrap() - direct).abs() < 1e-15);
    }

    #[test]
    fn abs_deviation_needs_window_on_curve() {
        let q = critical_curve_h(4.0, 1e-12).unwrap();
        let d = exact_distribution(100, ModelParams::new(4.0, q)).unwrap();
        assert!(matches!(abs_deviation_scaled(&d, None), Err(Error::Regime { .. })));
        let w = ConditionalWindow::around_maximizer(&d, 0, DEFAULT_DELTA).unwrap();
        assert!(abs_deviation_scaled(&d, Some(&w)).is_ok());
    }

    #[test]
    fn quartic_limit_constants() {
        assert!((limits::quartic_kurtosis() - 2.1884).abs() < 1e-4);
        assert!((limits::quartic_abs_mean(CRITICAL_QUARTIC) - 0.4609).abs() < 1e-4);
        assert!((limits::gaussian_abs_mean(1.0) - 0.564_189_583_547_756_3).abs() < 1e-15);
    }

    #[test]
    fn laplace_requires_large_n() {
        assert!(laplace_check(MeanFieldModel::new(20, er(0.0)), DEFAULT_DELTA).is_err());
        let c = laplace_check(MeanFieldModel::new(60, ModelParams::new(ALPHA_C, H_C)), 0.4);
        assert!(c.is_err());
    }

    #[test]
    fn csv_export_has_header_and_rows() {
        let d = exact_distribution(3, er(0.0)).unwrap();
        let mut buf = Vec::new();
        d.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "k,m,log_weight,probability");
        assert_eq!(lines.len(), 5);
    }
}
