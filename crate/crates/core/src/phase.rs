//! Replica-symmetric phase diagram of the edge-triangle model.
//!
//! Everything here is a function of the scalar objective
//! `g(u) = α/6 u³ + h/2 u − I(u)/2` on `[0, 1]`, whose supremum is the
//! limiting free energy and whose maximizers are the limiting edge densities.
//! Stationary points solve `σ(αu² + h) = u`.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{bisect, entropy_derivative, entropy_term, logistic, logit};

/// Triangle weight at the critical point.
pub const ALPHA_C: f64 = 27.0 / 8.0;
/// Edge weight at the critical point, `ln 2 − 3/2`.
pub const H_C: f64 = LN_2 - 1.5;
/// Limiting edge density at the critical point.
pub const U_C: f64 = 2.0 / 3.0;
/// Quartic coefficient of the rate function at the critical point.
pub const CRITICAL_QUARTIC: f64 = 81.0 / 64.0;
/// Lower end of the replica-symmetric regime (exclusive).
pub const ALPHA_MIN: f64 = -2.0;

/// Number of interior points of the sign-change scan.
const SCAN_POINTS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub alpha: f64,
    pub h: f64,
}

impl ModelParams {
    pub const fn new(alpha: f64, h: f64) -> Self {
        Self { alpha, h }
    }

    /// `(27/8, ln 2 − 3/2)`.
    pub const fn critical() -> Self {
        Self::new(ALPHA_C, H_C)
    }

    pub fn is_replica_symmetric(&self) -> bool {
        self.alpha > ALPHA_MIN
    }

    pub fn require_replica_symmetric(&self) -> Result<()> {
        if self.is_replica_symmetric() {
            Ok(())
        } else {
            Err(Error::OutsideReplicaSymmetric(self.alpha))
        }
    }
}

/// Tolerances used when isolating and classifying stationary points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Bound on `|σ(αu² + h) − u|` at every returned root.
    pub residual: f64,
    /// Relative bound on `|g(u₁) − g(u₂)|` for two maxima to count as equal.
    pub equal_height: f64,
    /// Absolute bound on `|g''(u)|` for a stationary point to be degenerate.
    pub degeneracy: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            residual: 1e-10,
            equal_height: 1e-9,
            degeneracy: 1e-8,
        }
    }
}

impl Tolerances {
    pub fn with_residual(residual: f64) -> Self {
        Self {
            residual,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PointKind {
    LocalMax,
    LocalMin,
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StationaryPoint {
    pub u: f64,
    pub objective: f64,
    pub second_derivative: f64,
    pub kind: PointKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    Uniqueness,
    OnCriticalCurve,
    CriticalPoint,
    OutsideReplicaSymmetric,
}

/// Local expansion `g(u* + x) = g(u*) − c x² + k x³ + …` around a maximizer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaplaceConstants {
    pub c: f64,
    pub k: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Maximizer {
    pub point: StationaryPoint,
    pub laplace: LaplaceConstants,
    /// Gaussian fluctuation variance `u(1−u)/(1 − 2αu²(1−u))`; `None` when
    /// the maximizer is degenerate.
    pub variance: Option<f64>,
}

impl Maximizer {
    pub fn u(&self) -> f64 {
        self.point.u
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhasePortrait {
    pub params: ModelParams,
    pub regime: Regime,
    /// One entry, or two (ascending in `u`) on the critical curve. Empty
    /// outside the replica-symmetric regime.
    pub maximizers: Vec<Maximizer>,
    /// `NaN` outside the replica-symmetric regime.
    pub free_energy: f64,
    pub kappa: Option<f64>,
}

impl PhasePortrait {
    /// The maximizer with the given index.
    pub fn maximizer(&self, which: usize) -> Result<&Maximizer> {
        self.maximizers.get(which).ok_or(Error::NoSuchMaximizer {
            index: which,
            count: self.maximizers.len(),
        })
    }

    /// The unique maximizer; errors on the critical curve and outside the regime.
    pub fn u_star(&self) -> Result<f64> {
        match self.regime {
            Regime::Uniqueness | Regime::CriticalPoint => Ok(self.maximizers[0].u()),
            found => Err(Error::Regime {
                expected: "Uniqueness or CriticalPoint",
                found,
            }),
        }
    }
}

/// The objective `g(u) = α/6 u³ + h/2 u − I(u)/2` for `u ∈ [0, 1]`.
pub fn objective(u: f64, params: ModelParams) -> f64 {
    params.alpha / 6.0 * u * u * u + params.h / 2.0 * u - entropy_term(u) / 2.0
}

/// `σ(αu² + h) − u`; zero exactly at stationary points of [`objective`].
pub fn fixed_point_residual(u: f64, params: ModelParams) -> Result<f64> {
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::Domain {
            what: "u",
            value: u,
            domain: "(0, 1)",
        });
    }
    Ok(logistic(params.alpha * u * u + params.h) - u)
}

/// `αu² + h − logit(u) = 2 g'(u)`. Same sign as the fixed-point residual,
/// but stays well scaled near the boundaries.
fn stationarity_field(u: f64, p: ModelParams) -> f64 {
    p.alpha * u * u + p.h - logit(u)
}

/// Derivative of the objective of order 1..=5 at an interior point.
pub fn objective_derivative(u: f64, params: ModelParams, order: u32) -> f64 {
    let a = params.alpha;
    match order {
        1 => 0.5 * stationarity_field(u, params),
        2 => a * u - 0.5 * entropy_derivative(u, 2),
        3 => a - 0.5 * entropy_derivative(u, 3),
        4 | 5 => -0.5 * entropy_derivative(u, order),
        _ => panic!("objective derivative of order {order} not implemented"),
    }
}

/// Points where `2αu²(1−u) = 1`, i.e. where `g''` vanishes. They split
/// `(0, 1)` into intervals on which `g'` is monotone.
fn curvature_breakpoints(alpha: f64) -> Vec<f64> {
    let phi = |u: f64| 2.0 * alpha * u * u * (1.0 - u) - 1.0;
    if phi(U_C) <= 0.0 {
        return Vec::new();
    }
    vec![bisect(phi, 0.0, U_C), bisect(phi, U_C, 1.0)]
}

fn classify_kind(second: f64, tol: f64) -> PointKind {
    if second < -tol {
        PointKind::LocalMax
    } else if second > tol {
        PointKind::LocalMin
    } else {
        PointKind::Degenerate
    }
}

/// Newton iteration for a zero of `g^(order)` near `u0`.
fn newton_on_derivative(u0: f64, p: ModelParams, order: u32) -> Option<f64> {
    let mut u = u0;
    for _ in 0..60 {
        let d = objective_derivative(u, p, order + 1);
        if d == 0.0 || !d.is_finite() {
            return None;
        }
        let step = objective_derivative(u, p, order) / d;
        u -= step;
        if !(u > 0.0 && u < 1.0) {
            return None;
        }
        if step.abs() <= 4.0 * f64::EPSILON * u.abs() {
            break;
        }
    }
    Some(u)
}

/// A root of multiplicity 3 (the critical point) or 2 (a fold) can only be
/// located to `O(ε^{1/3})` from sign changes of `g'`. Snap it to the nearby
/// zero of `g'''` (cusp) or `g''` (fold) when that point is still a root.
fn polish_degenerate(u0: f64, p: ModelParams, tol: &Tolerances) -> f64 {
    for order in [3, 2] {
        if let Some(u) = newton_on_derivative(u0, p, order) {
            let ok = (u - u0).abs() < 1e-3
                && fixed_point_residual(u, p).is_ok_and(|r| r.abs() <= tol.residual)
                && objective_derivative(u, p, 2).abs() <= tol.degeneracy;
            if ok {
                return u;
            }
        }
    }
    u0
}

/// All stationary points of the objective in `(0, 1)`, ascending.
///
/// The residual is scanned on a uniform grid of 10⁴ interior points, with
/// the zeros of `g''` added as extra nodes so that each monotone piece of `g'`
/// is bracketed separately; every sign change is refined by bisection.
/// Roots closer to 0 or 1 than the grid are still caught because the
/// outermost nodes sit at `f64::MIN_POSITIVE` and `1 − ε/2`; roots within
/// `1e-16` of 1 (roughly `α + h > 36`) are out of reach.
pub fn find_stationary_points(params: ModelParams, tol: f64) -> Result<Vec<StationaryPoint>> {
    find_stationary_points_with(params, &Tolerances::with_residual(tol))
}

pub fn find_stationary_points_with(
    params: ModelParams,
    tol: &Tolerances,
) -> Result<Vec<StationaryPoint>> {
    params.require_replica_symmetric()?;
    if !(tol.residual > 0.0) {
        return Err(Error::Domain {
            what: "tol",
            value: tol.residual,
            domain: "(0, ∞)",
        });
    }

    let mut nodes: Vec<f64> = Vec::with_capacity(SCAN_POINTS + 4);
    nodes.push(f64::MIN_POSITIVE);
    nodes.extend((1..SCAN_POINTS).map(|i| i as f64 / SCAN_POINTS as f64));
    nodes.extend(curvature_breakpoints(params.alpha));
    nodes.push(1.0 - f64::EPSILON / 2.0);
    nodes.sort_by(f64::total_cmp);
    nodes.dedup();

    let field = |u: f64| stationarity_field(u, params);
    let values: Vec<f64> = nodes.iter().map(|&u| field(u)).collect();

    let mut roots: Vec<f64> = Vec::new();
    for i in 0..nodes.len() - 1 {
        let (a, b) = (values[i], values[i + 1]);
        if a == 0.0 {
            roots.push(nodes[i]);
        } else if b != 0.0 && (a < 0.0) != (b < 0.0) {
            roots.push(bisect(field, nodes[i], nodes[i + 1]));
        }
    }

    let mut points: Vec<StationaryPoint> = Vec::with_capacity(roots.len());
    for u0 in roots {
        let residual = fixed_point_residual(u0, params)?;
        if residual.abs() > tol.residual {
            return Err(Error::Convergence(format!(
                "stationary point near u = {u0} has residual {residual:e} > {:e}",
                tol.residual
            )));
        }
        let mut u = u0;
        if objective_derivative(u, params, 2).abs() <= tol.degeneracy {
            u = polish_degenerate(u, params, tol);
        }
        if points.last().is_some_and(|p: &StationaryPoint| (p.u - u).abs() < 1e-9) {
            continue;
        }
        let second = objective_derivative(u, params, 2);
        points.push(StationaryPoint {
            u,
            objective: objective(u, params),
            second_derivative: second,
            kind: classify_kind(second, tol.degeneracy),
        });
    }
    Ok(points)
}

/// A degenerate point is a maximum only at a cusp; at a fold it is an inflection.
fn is_local_max(p: &StationaryPoint, params: ModelParams) -> bool {
    match p.kind {
        PointKind::LocalMax => true,
        PointKind::LocalMin => false,
        PointKind::Degenerate => {
            let d = 1e-3_f64.min(p.u / 2.0).min((1.0 - p.u) / 2.0);
            objective(p.u - d, params) < p.objective && objective(p.u + d, params) < p.objective
        }
    }
}

fn laplace_constants(u: f64, params: ModelParams) -> LaplaceConstants {
    LaplaceConstants {
        c: -objective_derivative(u, params, 2) / 2.0,
        k: objective_derivative(u, params, 3) / 6.0,
    }
}

/// `u(1−u)/(1 − 2αu²(1−u))`.
pub fn variance_formula(alpha: f64, u: f64) -> f64 {
    u * (1.0 - u) / (1.0 - 2.0 * alpha * u * u * (1.0 - u))
}

/// Weight of the lower maximizer in the on-curve mixture,
/// `w₁/(w₁ + w₂)` with `wᵢ = (1 − 2αuᵢ²(1−uᵢ))^{−1/2}`.
pub fn mixture_weight(alpha: f64, u1: f64, u2: f64) -> f64 {
    let w = |u: f64| (1.0 - 2.0 * alpha * u * u * (1.0 - u)).sqrt().recip();
    let (w1, w2) = (w(u1), w(u2));
    w1 / (w1 + w2)
}

pub fn classify_phase(params: ModelParams, tol: f64) -> PhasePortrait {
    classify_phase_with(params, &Tolerances::with_residual(tol))
        .expect("classification with default tolerances")
}

/// Regime, maximizers and limiting constants at `params`.
pub fn classify_phase_with(params: ModelParams, tol: &Tolerances) -> Result<PhasePortrait> {
    if !params.is_replica_symmetric() {
        return Ok(PhasePortrait {
            params,
            regime: Regime::OutsideReplicaSymmetric,
            maximizers: Vec::new(),
            free_energy: f64::NAN,
            kappa: None,
        });
    }
    let points = find_stationary_points_with(params, tol)?;
    let candidates: Vec<StationaryPoint> = points
        .into_iter()
        .filter(|p| is_local_max(p, params))
        .collect();
    let free_energy = candidates
        .iter()
        .map(|p| p.objective)
        .fold(f64::NEG_INFINITY, f64::max);
    if !free_energy.is_finite() {
        return Err(Error::Convergence(format!(
            "no interior maximizer found at {params:?}"
        )));
    }
    let height_tol = tol.equal_height * free_energy.abs().max(1.0);
    let maximizers: Vec<Maximizer> = candidates
        .into_iter()
        .filter(|p| free_energy - p.objective <= height_tol)
        .map(|point| {
            let laplace = laplace_constants(point.u, params);
            let variance = (point.kind == PointKind::LocalMax)
                .then(|| variance_formula(params.alpha, point.u));
            Maximizer {
                point,
                laplace,
                variance,
            }
        })
        .collect();

    let regime = match maximizers.as_slice() {
        [m] if m.point.kind == PointKind::Degenerate => Regime::CriticalPoint,
        [_] => Regime::Uniqueness,
        [_, _] => Regime::OnCriticalCurve,
        _ => {
            return Err(Error::Convergence(format!(
                "{} maximizers of equal height at {params:?}",
                maximizers.len()
            )))
        }
    };
    let kappa = (regime == Regime::OnCriticalCurve)
        .then(|| mixture_weight(params.alpha, maximizers[0].u(), maximizers[1].u()));
    Ok(PhasePortrait {
        params,
        regime,
        maximizers,
        free_energy,
        kappa,
    })
}

/// `f_{α,h} = sup_u g(u)`.
pub fn free_energy(params: ModelParams) -> Result<f64> {
    params.require_replica_symmetric()?;
    Ok(classify_phase_with(params, &Tolerances::default())?.free_energy)
}

pub fn limiting_variance(portrait: &PhasePortrait, which: usize) -> Result<f64> {
    let m = portrait.maximizer(which)?;
    m.variance.ok_or(Error::DegenerateMaximizer {
        index: which,
        u: m.u(),
        c: m.laplace.c,
    })
}

pub fn mixture_weight_kappa(portrait: &PhasePortrait) -> Result<f64> {
    portrait.kappa.ok_or(Error::Regime {
        expected: "OnCriticalCurve",
        found: portrait.regime,
    })
}

/// `I_{α,h}(x) = f_{α,h} − g(x)`, the edge-density rate function.
pub fn rate_function(x: f64, params: ModelParams) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain {
            what: "x",
            value: x,
            domain: "[0, 1]",
        });
    }
    Ok(free_energy(params)? - objective(x, params))
}

/// Taylor data of the rate function around one maximizer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateExpansion {
    pub center: f64,
    /// Order-1 coefficient; zero up to the root residual.
    pub first_order: f64,
    /// Coefficients of `x², x³, x⁴, x⁵`.
    pub coefficients: [f64; 4],
    /// Largest `|I(u* + x) − Σ coefᵢ xⁱ|` seen on `|x| ≤ window`.
    pub max_remainder: f64,
}

impl RateExpansion {
    pub fn evaluate(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coefficients.iter().rev() {
            acc = (acc + c) * x;
        }
        (acc + self.first_order) * x
    }
}

/// Analytic Taylor coefficients of the rate function at maximizer `which`.
/// At the critical point orders 2 and 3 vanish and order 4 is 81/64.
pub fn rate_taylor_coefficients(
    params: ModelParams,
    which: usize,
    window: f64,
) -> Result<RateExpansion> {
    if !(window > 0.0) {
        return Err(Error::Domain {
            what: "window",
            value: window,
            domain: "(0, ∞)",
        });
    }
    let portrait = classify_phase_with(params, &Tolerances::default())?;
    let u = portrait.maximizer(which)?.u();
    let mut coefficients = [0.0; 4];
    let mut factorial = 1.0;
    for (i, order) in (2..=5u32).enumerate() {
        factorial *= order as f64;
        coefficients[i] = -objective_derivative(u, params, order) / factorial;
    }
    // Orders below the first non-vanishing one are zero by construction at
    // the critical point; rounding would otherwise leave ~1e-16 residue.
    if portrait.regime == Regime::CriticalPoint {
        coefficients[0] = 0.0;
        coefficients[1] = 0.0;
    }
    let mut expansion = RateExpansion {
        center: u,
        first_order: -objective_derivative(u, params, 1),
        coefficients,
        max_remainder: 0.0,
    };
    let f = portrait.free_energy;
    let steps = 64;
    for j in -steps..=steps {
        let x = window * j as f64 / steps as f64;
        let at = u + x;
        if at > 0.0 && at < 1.0 {
            let exact = f - objective(at, params);
            expansion.max_remainder = expansion.max_remainder.max((exact - expansion.evaluate(x)).abs());
        }
    }
    Ok(expansion)
}

/// `g(u_high) − g(u_low)` on the two-maxima branch, or the side of the single
/// maximizer otherwise. Increasing in `h`.
fn height_gap(alpha: f64, h: f64, tol: &Tolerances) -> Result<f64> {
    let params = ModelParams::new(alpha, h);
    let maxima: Vec<StationaryPoint> = find_stationary_points_with(params, tol)?
        .into_iter()
        .filter(|p| is_local_max(p, params))
        .collect();
    Ok(match maxima.as_slice() {
        [lo, .., hi] => hi.objective - lo.objective,
        [only] if only.u > U_C => 1.0,
        _ => -1.0,
    })
}

/// The critical curve `h = q(α)` for `α > 27/8`: the edge weight at which the
/// two local maxima of the objective have equal height.
///
/// Bisection in `h` on the sign of the height gap, starting from
/// `[h_c − 6, h_c]` and widening downwards if the bracket does not hold.
pub fn critical_curve_h(alpha: f64, tol: f64) -> Result<f64> {
    if !(alpha > ALPHA_C) {
        return Err(Error::Domain {
            what: "alpha",
            value: alpha,
            domain: "(27/8, ∞)",
        });
    }
    let tols = Tolerances::default();
    let (mut lo, mut hi) = (H_C - 6.0, H_C);
    let mut widenings = 0;
    while height_gap(alpha, lo, &tols)? >= 0.0 {
        widenings += 1;
        if widenings > 20 {
            return Err(Error::Convergence(format!(
                "no bracket for the critical curve at alpha = {alpha}"
            )));
        }
        lo -= 6.0;
    }
    if height_gap(alpha, hi, &tols)? <= 0.0 {
        return Err(Error::Convergence(format!(
            "critical curve not below h_c at alpha = {alpha}"
        )));
    }
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let gap = height_gap(alpha, mid, &tols)?;
        if gap == 0.0 {
            return Ok(mid);
        }
        if gap < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let h = 0.5 * (lo + hi);
    let gap = height_gap(alpha, h, &tols)?;
    if gap.abs() > tol {
        return Err(Error::Convergence(format!(
            "height gap {gap:e} at alpha = {alpha} exceeds tolerance {tol:e}"
        )));
    }
    Ok(h)
}
