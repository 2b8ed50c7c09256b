use edgetri::stats::{empirical_law, integrated_autocorrelation_time, summarize, total_variation};
use edgetri::verify::ChainBudget;
use edgetri::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn normals(seed: u64, len: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len).map(|_| rng.sample(StandardNormal)).collect()
}

fn ar1(seed: u64, len: usize, rho: f64) -> Vec<f64> {
    let z = normals(seed, len);
    let mut x = Vec::with_capacity(len);
    let mut prev = z[0] / (1.0 - rho * rho).sqrt();
    for &e in &z {
        prev = rho * prev + e;
        x.push(prev);
    }
    x
}

#[test]
fn iid_gaussian_summary() {
    let s = summarize(&normals(1, 200_000)).unwrap();
    assert!(s.mean.abs() < 3.0 * s.standard_error);
    assert!((s.variance - 1.0).abs() < 3.0 * s.variance_se());
    assert!(s.skewness.abs() < 3.0 * s.skewness_se());
    assert!((s.kurtosis - 3.0).abs() < 3.0 * s.kurtosis_se());
    assert!((s.tau_int - 0.5).abs() < 0.05);
}

#[test]
fn ar1_autocorrelation_time() {
    // τ_int = ½ (1 + ρ)/(1 − ρ)
    for rho in [0.5, 0.9] {
        let tau = integrated_autocorrelation_time(&ar1(2, 400_000, rho));
        let want = 0.5 * (1.0 + rho) / (1.0 - rho);
        assert!((tau / want - 1.0).abs() < 0.1, "rho {rho}: {tau} vs {want}");
    }
}

#[test]
fn ar1_standard_error_is_honest() {
    // spread of means over independent replicas against the reported SE
    let rho = 0.8;
    let reps: Vec<(f64, f64)> = (0..60)
        .map(|i| {
            let s = summarize(&ar1(100 + i, 20_000, rho)).unwrap();
            (s.mean, s.standard_error)
        })
        .collect();
    let m = reps.iter().map(|r| r.0).sum::<f64>() / reps.len() as f64;
    let sd = (reps.iter().map(|r| (r.0 - m).powi(2)).sum::<f64>() / (reps.len() - 1) as f64).sqrt();
    let se = reps.iter().map(|r| r.1).sum::<f64>() / reps.len() as f64;
    assert!((sd / se - 1.0).abs() < 0.25, "{sd} vs {se}");
}

#[test]
fn empirical_law_and_distance() {
    let law = empirical_law([0, 1, 1, 3], 3);
    assert_eq!(law, vec![0.25, 0.5, 0.0, 0.25]);
    assert_eq!(total_variation(&law, &[0.25, 0.25, 0.25, 0.25]), 0.25);
}

#[test]
fn clt_verdicts_at_alpha_zero() {
    let budget = ChainBudget {
        burn_in_sweeps: 200,
        samples: 8000,
        ..ChainBudget::default()
    };
    for h in [-1.0, 0.0, 1.0] {
        let v = verify_clt(ModelParams::new(0.0, h), 64, &budget).unwrap();
        assert!(v.pass, "h {h}\n{v}");
        assert!(!v.is_failure());
    }
}

#[test]
fn slln_verdict_in_uniqueness() {
    let budget = ChainBudget {
        burn_in_sweeps: 200,
        samples: 3000,
        ..ChainBudget::default()
    };
    let v = verify_slln(ModelParams::new(1.0, 0.0), &[32, 64, 128], &budget).unwrap();
    assert!(v.pass, "{v}");
    assert!(v.rows.iter().filter(|r| r.label.starts_with("gap")).count() == 2);
}

#[test]
fn verdicts_reject_wrong_regime() {
    let budget = ChainBudget::default();
    let q = critical_curve_h(4.0, 1e-12).unwrap();
    assert!(matches!(
        verify_clt(ModelParams::new(4.0, q), 32, &budget),
        Err(Error::Regime { .. })
    ));
    assert!(verify_mixture(ModelParams::new(1.0, 0.0), &[200], 0.05, EnergyScale::PairCount).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn summary_is_shift_invariant(seed in any::<u64>(), shift in -100.0f64..100.0) {
        let xs = normals(seed, 500);
        let ys: Vec<f64> = xs.iter().map(|x| x + shift).collect();
        let (a, b) = (summarize(&xs).unwrap(), summarize(&ys).unwrap());
        prop_assert!((b.mean - a.mean - shift).abs() < 1e-9);
        prop_assert!((b.variance - a.variance).abs() < 1e-8);
        prop_assert!(a.tau_int >= 0.5 && a.ess <= 500.0 + 1e-9);
    }
}
