//! Small numerical kernels shared by the solver, the exact mean-field sums and
//! the enumerator: logistic/logit, the binary entropy term, log-binomials and a
//! compensated log-sum-exp.

use crate::error::{Error, Result};

/// Logistic function `1 / (1 + e^{-x})`, evaluated without overflow.
#[inline]
pub fn logistic(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// `ln(u / (1 - u))`.
#[inline]
pub fn logit(u: f64) -> f64 {
    u.ln() - (-u).ln_1p()
}

/// `I(u) = u ln u + (1 - u) ln(1 - u)`, extended by continuity so that
/// `I(0) = I(1) = 0`.
#[inline]
pub fn entropy_term(u: f64) -> f64 {
    let a = if u > 0.0 { u * u.ln() } else { 0.0 };
    let b = if u < 1.0 { (1.0 - u) * (-u).ln_1p() } else { 0.0 };
    a + b
}

/// Derivatives of `I` of order 1..=5 at an interior point.
pub fn entropy_derivative(u: f64, order: u32) -> f64 {
    let v = 1.0 - u;
    match order {
        1 => logit(u),
        2 => 1.0 / (u * v),
        3 => -1.0 / (u * u) + 1.0 / (v * v),
        4 => 2.0 / u.powi(3) + 2.0 / v.powi(3),
        5 => -6.0 / u.powi(4) + 6.0 / v.powi(4),
        _ => panic!("entropy derivative of order {order} not implemented"),
    }
}

/// Neumaier-compensated running sum. Used wherever many positive terms of
/// different magnitude are aggregated, so results do not depend on chunking.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::default();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// `ln Σ exp(x_i)`; returns `-inf` for an empty slice or when every term is `-inf`.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if max == f64::INFINITY {
        return f64::INFINITY;
    }
    let s: CompensatedSum = xs.iter().map(|&x| (x - max).exp()).collect();
    max + s.value().ln()
}

fn stirling_tail(n: f64) -> f64 {
    let r = 1.0 / n;
    let r2 = r * r;
    r * (1.0 / 12.0 - r2 * (1.0 / 360.0 - r2 * (1.0 / 1260.0 - r2 / 1680.0)))
}

/// Natural log of the binomial coefficient `C(n, k)`.
///
/// Small `min(k, n - k)` uses the exact product form; otherwise the
/// Stirling difference form with the series tail, written so that no two
/// large log-factorials are subtracted. For `n ≤ 10^7` the absolute error is
/// a few ulps of the result.
pub fn log_binomial(n: u64, k: u64) -> Result<f64> {
    if k > n {
        return Err(Error::Domain {
            what: "k",
            value: k as f64,
            domain: "0 ≤ k ≤ N",
        });
    }
    let j = k.min(n - k);
    if j == 0 {
        return Ok(0.0);
    }
    if j <= 30 {
        let nf = n as f64;
        let s: CompensatedSum = (0..j)
            .map(|i| ((nf - i as f64) / (i as f64 + 1.0)).ln())
            .collect();
        return Ok(s.value());
    }
    let (nf, kf) = (n as f64, k as f64);
    let rf = nf - kf;
    // k ln(n/k) + (n-k) ln(n/(n-k)) written with ln_1p on the smaller ratio.
    let main = kf * (nf / kf).ln() - rf * (-kf / nf).ln_1p();
    let half = 0.5 * (nf / (2.0 * std::f64::consts::PI * kf * rf)).ln();
    Ok(main + half + stirling_tail(nf) - stirling_tail(kf) - stirling_tail(rf))
}

/// Bisection on a sign change of `f` over `[lo, hi]`; `f(lo)` and `f(hi)`
/// must have opposite signs (or one of them be zero). Runs until the bracket
/// stops shrinking in floating point.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    if flo == 0.0 {
        return lo;
    }
    if f(hi) == 0.0 {
        return hi;
    }
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn logistic_is_symmetric_and_stable() {
        assert_eq!(logistic(0.0), 0.5);
        assert!((logistic(2.0) + logistic(-2.0) - 1.0).abs() < 1e-15);
        assert_eq!(logistic(-1000.0), 0.0);
        assert_eq!(logistic(1000.0), 1.0);
    }

    #[test]
    fn entropy_boundary_convention() {
        assert_eq!(entropy_term(0.0), 0.0);
        assert_eq!(entropy_term(1.0), 0.0);
        assert!((entropy_term(0.5) + std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn small_binomials() {
        assert!((log_binomial(3, 1).unwrap() - 3f64.ln()).abs() < 1e-15);
        assert_eq!(log_binomial(17, 0).unwrap(), 0.0);
        assert_eq!(log_binomial(17, 17).unwrap(), 0.0);
        assert!(log_binomial(3, 4).is_err());
        // C(100, 50) = 100891344545564193334812497256
        let exact = 1.008_913_445_455_641_9e29_f64.ln();
        assert!((log_binomial(100, 50).unwrap() - exact).abs() < 1e-12);
    }

    #[test]
    fn product_and_stirling_branches_agree_at_the_seam() {
        for n in [200u64, 5000, 1_000_000] {
            let via_step = log_binomial(n, 30).unwrap() + ((n - 30) as f64 / 31.0).ln();
            let direct = log_binomial(n, 31).unwrap();
            assert!((via_step - direct).abs() < 1e-9 * direct.abs().max(1.0), "n={n}");
        }
    }

    #[test]
    fn lse_handles_extremes() {
        assert_eq!(log_sum_exp(&[]), f64::NEG_INFINITY);
        assert!((log_sum_exp(&[1000.0, 1000.0]) - (1000.0 + 2f64.ln())).abs() < 1e-12);
        assert!((log_sum_exp(&[0.0, f64::NEG_INFINITY]) - 0.0).abs() < 1e-15);
    }
}
