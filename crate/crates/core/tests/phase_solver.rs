use edgetri::phase::{objective_derivative, variance_formula, ALPHA_C, H_C, U_C};
use edgetri::*;
use proptest::prelude::*;

/// `g` written out from scratch so the oracles below do not share code with
/// the library.
fn g(u: f64, a: f64, h: f64) -> f64 {
    let ent = if u <= 0.0 || u >= 1.0 {
        0.0
    } else {
        u * u.ln() + (1.0 - u) * (1.0 - u).ln()
    };
    a / 6.0 * u * u * u + h / 2.0 * u - ent / 2.0
}

/// Golden-section maximization of `g` on `[lo, hi]`.
fn golden_max(a: f64, h: f64, mut lo: f64, mut hi: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let x1 = hi - r * (hi - lo);
        let x2 = lo + r * (hi - lo);
        if g(x1, a, h) < g(x2, a, h) {
            lo = x1;
        } else {
            hi = x2;
        }
    }
    g(0.5 * (lo + hi), a, h)
}

/// Equal-height oracle: bisection in `h` on the difference of the two
/// local maxima found by golden-section search on either side of 2/3.
fn q_oracle(a: f64) -> f64 {
    let gap = |h: f64| golden_max(a, h, U_C, 1.0 - 1e-12) - golden_max(a, h, 1e-12, U_C);
    let (mut lo, mut hi) = (-4.0, H_C);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if gap(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Frozen output of the equal-height oracle at α = 4.
const Q_FOUR: f64 = -1.076_880_428_0;

#[test]
fn critical_curve_golden_value() {
    let oracle = q_oracle(4.0);
    assert!((oracle - Q_FOUR).abs() < 1e-9, "oracle {oracle}");
    let q = critical_curve_h(4.0, 1e-12).unwrap();
    assert!((q - Q_FOUR).abs() < 1e-9, "solver {q}");
}

#[test]
fn critical_curve_matches_oracle_elsewhere() {
    for a in [3.5, 4.5, 6.0, 9.0] {
        let q = critical_curve_h(a, 1e-12).unwrap();
        let o = q_oracle(a);
        assert!((q - o).abs() < 1e-8, "alpha {a}: {q} vs {o}");
    }
}

#[test]
fn curve_endpoint_approaches_critical_point() {
    let mut prev = f64::NEG_INFINITY;
    for eps in [1e-1, 1e-2, 1e-3] {
        let q = critical_curve_h(ALPHA_C + eps, 1e-12).unwrap();
        assert!(q > prev && q < H_C);
        prev = q;
    }
    assert!((prev - H_C).abs() < 2e-3);
}

#[test]
fn free_energy_matches_brute_force_maximum() {
    for (a, h) in [(0.0, 0.3), (1.0, 0.0), (2.0, -0.8), (-1.5, 0.5), (6.0, -2.5), (ALPHA_C, H_C)] {
        let brute = (1..200_000)
            .map(|i| g(i as f64 / 200_000.0, a, h))
            .fold(f64::NEG_INFINITY, f64::max);
        let f = free_energy(ModelParams::new(a, h)).unwrap();
        assert!(f >= brute - 1e-14 && f - brute < 1e-9, "({a},{h}): {f} vs {brute}");
    }
}

#[test]
fn erdos_renyi_free_energy() {
    for h in [-2.0f64, -1.0, 0.0, 1.0, 2.0] {
        let f = free_energy(ModelParams::new(0.0, h)).unwrap();
        assert!((f - 0.5 * h.exp().ln_1p()).abs() < 1e-12);
    }
}

#[test]
fn slln_targets() {
    let p = classify_phase(ModelParams::new(2.0, -0.8), 1e-10);
    let u = p.u_star().unwrap();
    let direct = 1.0 / (1.0 + (-(2.0 * u * u - 0.8)).exp());
    assert!((direct - u).abs() < 1e-10);
}

#[test]
fn rate_limit_constant_at_alpha_one() {
    let p = classify_phase(ModelParams::new(1.0, 0.0), 1e-10);
    let u = p.maximizers[0].u();
    let c0 = (1.0 - 2.0 * u * u * (1.0 - u)) / (4.0 * u * (1.0 - u));
    assert!((p.maximizers[0].laplace.c - c0).abs() < 1e-14);
    assert!((c0 - 0.7371).abs() < 1e-4);
    let limit = 1.0 / (std::f64::consts::PI * c0).sqrt();
    assert!((limit - 0.6572).abs() < 1e-4);
}

#[test]
fn taylor_expansion_tracks_rate_function() {
    let params = ModelParams::new(1.0, 0.0);
    let e = rate_taylor_coefficients(params, 0, 0.05).unwrap();
    for x in [-0.04, -0.01, 0.02, 0.05] {
        let exact = rate_function(e.center + x, params).unwrap();
        assert!((exact - e.evaluate(x)).abs() < 1e-7, "x {x}");
    }
    // remainder is sixth order
    assert!(e.max_remainder < 1e-7);
}

#[test]
fn critical_rate_is_quartic() {
    let params = ModelParams::critical();
    for x in [1e-2, -1e-2, 3e-3] {
        let r = rate_function(U_C + x, params).unwrap();
        assert!((r / x.powi(4) - 81.0 / 64.0).abs() < 0.05, "x {x}: {}", r / x.powi(4));
    }
    // order-5 coefficient is −g⁽⁵⁾/120 = I⁽⁵⁾(2/3)/240
    let e = rate_taylor_coefficients(params, 0, 0.01).unwrap();
    let i5 = -6.0 / U_C.powi(4) + 6.0 / (1.0 - U_C).powi(4);
    assert!((e.coefficients[3] - i5 / 240.0).abs() < 1e-10);
}

#[test]
fn on_curve_maxima_have_equal_height_and_kappa_in_range() {
    for a in [3.6, 4.0, 5.0, 7.0] {
        let q = critical_curve_h(a, 1e-12).unwrap();
        let p = classify_phase(ModelParams::new(a, q), 1e-10);
        assert_eq!(p.regime, Regime::OnCriticalCurve, "alpha {a}");
        let k = mixture_weight_kappa(&p).unwrap();
        assert!(k > 0.0 && k < 1.0);
        let heights: Vec<f64> = p.maximizers.iter().map(|m| g(m.u(), a, q)).collect();
        assert!((heights[0] - heights[1]).abs() < 1e-12);
    }
}

#[test]
fn outside_regime_is_reported() {
    let p = classify_phase(ModelParams::new(-2.0, 0.0), 1e-10);
    assert_eq!(p.regime, Regime::OutsideReplicaSymmetric);
    assert!(matches!(rate_function(0.5, ModelParams::new(-4.0, 0.0)), Err(Error::OutsideReplicaSymmetric(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn roots_have_small_residual(a in -1.99f64..12.0, h in -8.0f64..4.0) {
        let params = ModelParams::new(a, h);
        let pts = find_stationary_points(params, 1e-10).unwrap();
        prop_assert!(!pts.is_empty());
        prop_assert!(pts.len() <= 3);
        for p in &pts {
            prop_assert!(fixed_point_residual(p.u, params).unwrap().abs() <= 1e-10);
        }
        for w in pts.windows(2) {
            prop_assert!(w[0].u < w[1].u);
        }
    }

    #[test]
    fn free_energy_dominates_objective(a in -1.99f64..12.0, h in -8.0f64..4.0, u in 0.0f64..=1.0) {
        let params = ModelParams::new(a, h);
        let f = free_energy(params).unwrap();
        prop_assert!(f >= objective(u, params) - 1e-14);
        prop_assert!(rate_function(u, params).unwrap() >= -1e-14);
    }

    #[test]
    fn variance_is_inverse_curvature(a in -1.99f64..3.3, h in -3.0f64..3.0) {
        let p = classify_phase(ModelParams::new(a, h), 1e-10);
        prop_assert_eq!(p.regime, Regime::Uniqueness);
        let m = &p.maximizers[0];
        let v = limiting_variance(&p, 0).unwrap();
        prop_assert!(v > 0.0);
        prop_assert!((v - 0.25 / m.laplace.c).abs() <= 1e-10 * v.max(1.0));
        prop_assert!((v - variance_formula(a, m.u())).abs() <= 1e-12 * v.max(1.0));
        prop_assert!(objective_derivative(m.u(), ModelParams::new(a, h), 2) < 0.0);
    }

    #[test]
    fn maximizer_is_monotone_in_h(a in -1.99f64..3.3, h in -3.0f64..3.0, dh in 0.01f64..1.0) {
        let u1 = classify_phase(ModelParams::new(a, h), 1e-10).u_star().unwrap();
        let u2 = classify_phase(ModelParams::new(a, h + dh), 1e-10).u_star().unwrap();
        prop_assert!(u2 > u1);
    }
}
