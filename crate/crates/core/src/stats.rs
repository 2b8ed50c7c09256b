//! Summary statistics for correlated Monte Carlo series.
//!
//! The integrated autocorrelation time uses the convention
//! `τ_int = 1/2 + Σ_{t≥1} ρ_t`, so an independent series has `τ_int = 1/2`,
//! the effective sample size is `N / (2τ_int)` and the standard error of the
//! mean is `√(var · 2τ_int / N)`. The sum is truncated by Geyer's initial
//! monotone positive sequence and `τ_int` is clamped below at 1/2.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;
use crate::sampler::ChainTrace;

pub const MIN_SAMPLES: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub count: usize,
    pub mean: f64,
    pub variance: f64,
    pub skewness: f64,
    /// Raw (non-excess) kurtosis `m₄/m₂²`; 3 for a Gaussian.
    pub kurtosis: f64,
    pub tau_int: f64,
    pub ess: f64,
    pub standard_error: f64,
}

impl SummaryStats {
    /// Approximate standard error of the skewness, `√(6/ESS)`.
    pub fn skewness_se(&self) -> f64 {
        (6.0 / self.ess).sqrt()
    }

    /// Approximate standard error of the kurtosis, `√(24/ESS)`.
    pub fn kurtosis_se(&self) -> f64 {
        (24.0 / self.ess).sqrt()
    }

    /// Standard error of the sample variance under a Gaussian approximation.
    pub fn variance_se(&self) -> f64 {
        self.variance * ((self.kurtosis - 1.0).max(0.0) / self.ess).sqrt()
    }

    pub fn std_dev(&self) -> f64 {
        self.variance.sqrt()
    }
}

fn mean_of(xs: &[f64]) -> f64 {
    let s: CompensatedSum = xs.iter().copied().collect();
    s.value() / xs.len() as f64
}

/// Lag-`t` autocovariance with the biased `1/N` normalization.
fn autocovariance(centered: &[f64], t: usize) -> f64 {
    let s: CompensatedSum = centered
        .iter()
        .zip(&centered[t..])
        .map(|(a, b)| a * b)
        .collect();
    s.value() / centered.len() as f64
}

/// `τ_int` by the initial monotone positive sequence of pair sums.
pub fn integrated_autocorrelation_time(xs: &[f64]) -> f64 {
    let n = xs.len();
    let mu = mean_of(xs);
    let centered: Vec<f64> = xs.iter().map(|x| x - mu).collect();
    let g0 = autocovariance(&centered, 0);
    if !(g0 > 0.0) {
        return 0.5;
    }
    let mut total = 0.0;
    let mut prev = f64::INFINITY;
    let mut m = 0;
    while 2 * m + 1 < n / 2 {
        let pair = (autocovariance(&centered, 2 * m) + autocovariance(&centered, 2 * m + 1)) / g0;
        if pair <= 0.0 {
            break;
        }
        let pair = pair.min(prev);
        total += pair;
        prev = pair;
        m += 1;
    }
    (total - 0.5).max(0.5)
}

pub fn summarize(xs: &[f64]) -> Result<SummaryStats> {
    let count = xs.len();
    if count < MIN_SAMPLES {
        return Err(Error::InsufficientData {
            got: count,
            need: MIN_SAMPLES,
        });
    }
    let mean = mean_of(xs);
    let central = |p: i32| {
        let s: CompensatedSum = xs.iter().map(|x| (x - mean).powi(p)).collect();
        s.value() / count as f64
    };
    let m2 = central(2);
    let (m3, m4) = (central(3), central(4));
    let variance = m2 * count as f64 / (count - 1) as f64;
    let (skewness, kurtosis) = if m2 > 0.0 {
        (m3 / m2.powf(1.5), m4 / (m2 * m2))
    } else {
        (0.0, 0.0)
    };
    let tau_int = integrated_autocorrelation_time(xs);
    let ess = count as f64 / (2.0 * tau_int);
    Ok(SummaryStats {
        count,
        mean,
        variance,
        skewness,
        kurtosis,
        tau_int,
        ess,
        standard_error: (variance * 2.0 * tau_int / count as f64).sqrt(),
    })
}

/// Summary of the recorded edge densities `2E/n²`.
pub fn summarize_trace(trace: &ChainTrace) -> Result<SummaryStats> {
    summarize(&trace.edge_densities())
}

/// Least-squares line through `(x, y)`: `(slope, intercept)`.
pub fn least_squares(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::InsufficientData {
            got: xs.len().min(ys.len()),
            need: 2,
        });
    }
    let (mx, my) = (mean_of(xs), mean_of(ys));
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

/// Total variation distance `½ Σ |p − q|`.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    let len = p.len().max(q.len());
    let at = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
    0.5 * (0..len).map(|i| (at(p, i) - at(q, i)).abs()).sum::<f64>()
}

/// Empirical law of integer observations on `0..=max`.
pub fn empirical_law(values: impl IntoIterator<Item = u64>, max: u64) -> Vec<f64> {
    let mut counts = vec![0u64; max as usize + 1];
    let mut total = 0u64;
    for v in values {
        counts[v as usize] += 1;
        total += 1;
    }
    counts.iter().map(|&c| c as f64 / total.max(1) as f64).collect()
}
