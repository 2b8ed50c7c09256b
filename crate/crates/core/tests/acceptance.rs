//! Acceptance criteria. Each test prints one `criterion N: PASS|FAIL` line.
//!
//! Run with `cargo test -p edgetri --test acceptance -- --nocapture` to see
//! the report.

use std::time::{Duration, Instant};

use edgetri::meanfield::EnergyScale;
use edgetri::numeric::logistic;
use edgetri::stats::{empirical_law, total_variation};
use edgetri::verify::DEFAULT_EPSILON;
use edgetri::*;
use num_bigint::BigUint;

fn report(id: u32, title: &str, pass: bool, started: Instant, budget: Duration, detail: &str) {
    let elapsed = started.elapsed();
    let in_time = elapsed <= budget;
    let status = if pass && in_time { "PASS" } else { "FAIL" };
    println!(
        "criterion {id:>2}: {status} | {title} | {detail} | {:.2?} (budget {:?})",
        elapsed, budget
    );
    assert!(pass, "criterion {id} failed: {detail}");
    assert!(in_time, "criterion {id} exceeded its time budget: {elapsed:?}");
}

fn print_verdict(v: &TheoremVerdict) {
    for line in v.to_string().lines() {
        println!("    {line}");
    }
}

/// Composite Simpson rule on `[a, b]` with `m` (even) panels.
fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, m: usize) -> f64 {
    let h = (b - a) / m as f64;
    let mut s = f(a) + f(b);
    for i in 1..m {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// Kurtosis and `E|Y|` of the density `∝ exp(−(81/64) y⁴)` by quadrature.
fn quartic_targets() -> (f64, f64) {
    let a = 81.0 / 64.0;
    let w = |y: f64| (-a * y.powi(4)).exp();
    let z = simpson(w, -6.0, 6.0, 24_000);
    let m2 = simpson(|y| y * y * w(y), -6.0, 6.0, 24_000) / z;
    let m4 = simpson(|y| y.powi(4) * w(y), -6.0, 6.0, 24_000) / z;
    let abs = simpson(|y| y.abs() * w(y), -6.0, 6.0, 24_000) / z;
    (m4 / (m2 * m2), abs)
}

/// `ln C(n, k)` for every `k`, from exact big-integer binomials.
fn exact_log_binomials(n: u64) -> Vec<f64> {
    let mut c = BigUint::from(1u32);
    let mut out = Vec::with_capacity(n as usize + 1);
    for k in 0..=n {
        let bits = c.bits();
        let shift = bits.saturating_sub(60);
        let top = (&c >> shift).to_u64_digits().first().copied().unwrap_or(0);
        out.push((top as f64).ln() + shift as f64 * std::f64::consts::LN_2);
        c = c * BigUint::from(n - k) / BigUint::from(k + 1);
    }
    out
}

#[test]
fn criterion_01_critical_point_exactness() {
    let t = Instant::now();
    let p = classify_phase(ModelParams::new(27.0 / 8.0, 2f64.ln() - 1.5), 1e-10);
    let u = p.maximizers.first().map_or(f64::NAN, |m| m.u());
    let e = rate_taylor_coefficients(ModelParams::new(27.0 / 8.0, 2f64.ln() - 1.5), 0, 0.01).unwrap();
    let quartic = e.coefficients[2];
    let pass = p.regime == Regime::CriticalPoint
        && (u - 2.0 / 3.0).abs() <= 1e-9
        && (quartic - 81.0 / 64.0).abs() <= 1e-9;
    report(
        1,
        "critical point exactness",
        pass,
        t,
        Duration::from_secs(1),
        &format!("regime {:?}, u* = {u:.15}, quartic = {quartic:.15}", p.regime),
    );
}

#[test]
fn criterion_02_erdos_renyi_reduction() {
    let t = Instant::now();
    let n = 100usize;
    let pairs = (n * (n - 1) / 2) as u64;
    let ln_c = exact_log_binomials(pairs);
    let mut worst_f: f64 = 0.0;
    let mut worst_lp: f64 = 0.0;
    let mut sampler_ok = true;
    let mut lines = Vec::new();
    for (i, h) in [-2.0f64, -1.0, 0.0, 1.0, 2.0].into_iter().enumerate() {
        let f = free_energy(ModelParams::new(0.0, h)).unwrap();
        worst_f = worst_f.max((f - 0.5 * h.exp().ln_1p()).abs());

        let d = exact_distribution(n, ModelParams::new(0.0, h)).unwrap();
        let (lp, lq) = (logistic(h).ln(), logistic(-h).ln());
        for k in 0..=pairs as usize {
            let want = ln_c[k] + k as f64 * lp + (pairs as f64 - k as f64) * lq;
            worst_lp = worst_lp.max((d.log_probability(k) - want).abs());
        }

        let m = 64usize;
        let s = logistic(h);
        let mut cfg = ChainConfig::new(m, ModelParams::new(0.0, h), 2024, 10_000);
        cfg.stream = i as u64;
        cfg.init = InitialState::FromDensity(s);
        cfg.burn_in_sweeps = 200;
        let trace = run_chain(&cfg).unwrap();
        let ed = summarize(&trace.edge_densities()).unwrap();
        let td = summarize(&trace.triangle_densities()).unwrap();
        let mf = m as f64;
        let want_e = (1.0 - 1.0 / mf) * s;
        let want_t = (mf - 1.0) * (mf - 2.0) * s.powi(3) / (mf * mf);
        let ok_e = (ed.mean - want_e).abs() <= 3.0 * ed.standard_error;
        let ok_t = (td.mean - want_t).abs() <= 3.0 * td.standard_error;
        sampler_ok &= ok_e && ok_t;
        lines.push(format!(
            "h={h:+}: edge {:.5}±{:.1e} vs {want_e:.5}, triangle {:.5}±{:.1e} vs {want_t:.5}",
            ed.mean, ed.standard_error, td.mean, td.standard_error
        ));
    }
    for l in &lines {
        println!("    {l}");
    }
    let pass = worst_f <= 1e-12 && worst_lp <= 1e-10 && sampler_ok;
    report(
        2,
        "Erdős–Rényi reduction",
        pass,
        t,
        Duration::from_secs(60),
        &format!("max free-energy error {worst_f:.2e}, max log-prob error {worst_lp:.2e}, sampler within 3 SE: {sampler_ok}"),
    );
}

#[test]
fn criterion_03_oracle_equivalence_small_n() {
    let t = Instant::now();
    let n = 5usize;
    let table = edgetri::CountTable::build(n).unwrap();
    let mut pass = true;
    let mut details = Vec::new();
    for (i, (a, h)) in [(2.0, -0.5), (-1.0, 0.3), (3.0, -1.0)].into_iter().enumerate() {
        let params = ModelParams::new(a, h);
        let exact = edgetri::enumerate::enumerate_with(&table, params);
        let poly = edgetri::enumerate::polynomial_from_table(&table, a);
        let rel = (poly.log_eval_real(h) - exact.log_partition).exp_m1().abs();

        let mut cfg = ChainConfig::new(n, params, 77, 1);
        cfg.stream = i as u64;
        let mut s = Sampler::new(&cfg).unwrap();
        for _ in 0..10_000 {
            s.step();
        }
        let mut counts = [0u64; 11];
        let mut tvs = Vec::new();
        let mut done = 0u64;
        for checkpoint in [100_000u64, 1_000_000, 10_000_000] {
            while done < checkpoint {
                s.step();
                counts[s.state.edge_count() as usize] += 1;
                done += 1;
            }
            let law = empirical_law(
                counts.iter().enumerate().flat_map(|(k, &c)| std::iter::repeat_n(k as u64, c as usize)),
                10,
            );
            tvs.push(total_variation(&law, &exact.edge_count_law));
        }
        let ok = tvs[2] <= 0.02 && rel <= 1e-10;
        pass &= ok;
        details.push(format!(
            "({a},{h}): TV at 1e5/1e6/1e7 = {:.4}/{:.4}/{:.4}, polynomial rel err {rel:.1e}",
            tvs[0], tvs[1], tvs[2]
        ));
    }
    for d in &details {
        println!("    {d}");
    }
    report(3, "oracle equivalence at n = 5", pass, t, Duration::from_secs(300), "TV ≤ 0.02 and Z identity ≤ 1e-10");
}

#[test]
fn criterion_04_incremental_update_soundness() {
    let t = Instant::now();
    let mut cfg = ChainConfig::new(128, ModelParams::new(1.5, -0.4), 4, 1);
    cfg.init = InitialState::ErdosRenyi(0.4);
    let mut s = Sampler::new(&cfg).unwrap();
    for _ in 0..1_000_000 {
        s.step();
    }
    let cached = (s.state.edge_count(), s.state.triangle_count());
    let recount = s.state.full_recount();
    report(
        4,
        "incremental-update soundness",
        cached == recount,
        t,
        Duration::from_secs(60),
        &format!("cached {cached:?}, recount {recount:?}, flips {}", s.flips),
    );
}

#[test]
fn criterion_05_meanfield_free_energy_convergence() {
    let t = Instant::now();
    let params = ModelParams::new(1.0, 0.0);
    let f = free_energy(params).unwrap();
    let gap = |scale: EnergyScale, n: usize| {
        let m = MeanFieldModel::new(n, params).with_scale(scale);
        (m.distribution().unwrap().log_partition / m.n_sq() - f).abs()
    };
    let ns = [100usize, 200, 400, 800];
    let gaps: Vec<f64> = ns.iter().map(|&n| gap(EnergyScale::VertexSquare, n)).collect();
    let pair_count: Vec<f64> = ns.iter().map(|&n| gap(EnergyScale::PairCount, n)).collect();
    println!("    n² normalization gaps: {gaps:.6?}");
    println!("    n(n−1) normalization gaps (diagnostic): {pair_count:.9?}");
    let pass = gaps.windows(2).all(|w| w[1] < w[0]) && gaps[3] <= 5e-3;
    report(
        5,
        "mean-field free-energy convergence",
        pass,
        t,
        Duration::from_secs(60),
        &format!("gap at n=800: {:.3e}", gaps[3]),
    );
}

#[test]
fn criterion_06_quartic_critical_law() {
    let t = Instant::now();
    let (kurt_target, abs_target) = quartic_targets();
    let v = verify_critical_scaling(
        &[250, 500, 1000, 2000],
        &ChainBudget::default(),
        CriticalSource::MeanFieldExact,
        EnergyScale::PairCount,
    )
    .unwrap();
    print_verdict(&v);
    let row = |label: &str| v.rows.iter().find(|r| r.label == label).unwrap().estimated;
    let (k, a) = (row("final kurtosis"), row("final E|Y_n|"));
    let pass = v.pass && (k - kurt_target).abs() <= 0.05 && (a - abs_target).abs() <= 0.02 * abs_target;
    report(
        6,
        "quartic critical law",
        pass,
        t,
        Duration::from_secs(120),
        &format!("kurtosis {k:.5} (target {kurt_target:.5}), E|Y| {a:.5} (target {abs_target:.5})"),
    );
}

#[test]
fn criterion_07_mixture_weight() {
    let t = Instant::now();
    let q = critical_curve_h(4.0, 1e-12).unwrap();
    let params = ModelParams::new(4.0, q);
    let p = classify_phase(params, 1e-10);
    let (u1, u2) = (p.maximizers[0].u(), p.maximizers[1].u());
    let w = |u: f64| 1.0 / (1.0 - 2.0 * 4.0 * u * u * (1.0 - u)).sqrt();
    let kappa = w(u1) / (w(u1) + w(u2));
    let v = verify_mixture(params, &[2000], DEFAULT_EPSILON, EnergyScale::PairCount).unwrap();
    print_verdict(&v);
    let ratio = v.rows.iter().find(|r| r.label == "final ratio vs κ").unwrap().estimated;
    report(
        7,
        "mixture weight on the critical curve",
        v.pass && (ratio - kappa).abs() <= 0.05,
        t,
        Duration::from_secs(120),
        &format!("q(4) = {q:.12}, ratio {ratio:.6}, κ {kappa:.6}"),
    );
}

#[test]
fn criterion_08_rate_of_convergence() {
    let t = Instant::now();
    let ns = [250usize, 500, 1000, 2000];
    let er = verify_rate(ModelParams::new(0.0, 0.0), &ns, EnergyScale::PairCount).unwrap();
    let crit = verify_rate(ModelParams::critical(), &ns, EnergyScale::PairCount).unwrap();
    let budget = ChainBudget {
        seed: 8,
        ..ChainBudget::default()
    };
    let sampler = verify_rate_sampler(ModelParams::new(0.0, 0.0), &[32, 64, 128], &budget).unwrap();
    let sampler_crit = verify_rate_sampler(ModelParams::critical(), &[32, 64, 128], &budget).unwrap();
    for v in [&er, &crit, &sampler, &sampler_crit] {
        print_verdict(v);
    }
    let last = |v: &TheoremVerdict| v.rows.last().unwrap().estimated;
    let (a, b) = (last(&er), last(&crit));
    let pass = (a - 1.0 / std::f64::consts::PI.sqrt()).abs() <= 0.02 * 0.5642
        && (b - 0.4609).abs() <= 0.02 * 0.4609
        && er.pass
        && crit.pass
        && sampler.hard
        && sampler.pass;
    report(
        8,
        "rate of convergence",
        pass,
        t,
        Duration::from_secs(600),
        &format!(
            "n·E|m−½| = {a:.5}, √n·E|m−⅔| = {b:.5}, sampler (α=0) {}, sampler at critical point {}",
            sampler.status(),
            sampler_crit.status()
        ),
    );
}

#[test]
fn criterion_09_clt_variance() {
    let t = Instant::now();
    let params = ModelParams::new(1.0, 0.0);
    let p = classify_phase(params, 1e-10);
    let u = p.maximizers[0].u();
    let v_formula = u * (1.0 - u) / (1.0 - 2.0 * u * u * (1.0 - u));
    let v = verify_clt(params, 128, &ChainBudget { seed: 9, ..ChainBudget::default() }).unwrap();
    print_verdict(&v);
    let var = v.rows[0].estimated;
    let pass = v.pass && (var - v_formula).abs() <= 0.1 * v_formula;
    report(
        9,
        "CLT variance",
        pass,
        t,
        Duration::from_secs(600),
        &format!("variance {var:.5} vs {v_formula:.5}, skewness {:.4}", v.rows[1].estimated),
    );
}

#[test]
fn criterion_10_on_curve_concentration() {
    let t = Instant::now();
    let q = critical_curve_h(4.0, 1e-12).unwrap();
    let params = ModelParams::new(4.0, q);
    let exact = verify_mixture(params, &[200, 400, 800], DEFAULT_EPSILON, EnergyScale::PairCount).unwrap();
    let sampler = verify_mixture_sampler(
        params,
        64,
        DEFAULT_EPSILON,
        &ChainBudget { seed: 10, ..ChainBudget::default() },
    )
    .unwrap();
    let literal = verify_mixture(params, &[200, 400, 800], DEFAULT_EPSILON, EnergyScale::VertexSquare).unwrap();
    print_verdict(&exact);
    print_verdict(&literal);
    print_verdict(&sampler);
    let slope = exact.rows.last().unwrap().estimated;
    let literal_slope = literal.rows.last().unwrap().estimated;
    report(
        10,
        "on-curve concentration",
        exact.pass && slope < 0.0 && literal_slope < 0.0 && !sampler.hard,
        t,
        Duration::from_secs(600),
        &format!(
            "complement slope {slope:.4e} (n² lattice {literal_slope:.4e}); sampler basins: {}",
            sampler.status()
        ),
    );
}
