//! Built-in verification suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use taustar_core::{
    counterexample_r8, mix_with_point_mass, pop_tau_star, pop_tau_star_binary,
    pop_tau_star_from_probs, sweep_3x3, t_star, EstimatorConfig, JointDistribution, Margin,
    Normalization, PairedSample, Result,
};

use crate::report::Report;

pub const SUITES: [&str; 4] = ["appendix-b", "mixture", "counterexample", "identities"];

pub struct Outcome {
    pub report: Report,
    pub pass: bool,
}

pub fn run(suite: &str, trials: usize, seed: u64) -> Result<Outcome> {
    match suite {
        "appendix-b" => sweep(trials, seed),
        "mixture" => mixture(seed),
        "counterexample" => counterexample(),
        "identities" => identities(seed),
        _ => unreachable!("suite names are validated by the parser"),
    }
}

fn sweep(trials: usize, seed: u64) -> Result<Outcome> {
    let settings = [
        ("uniform", [1.0 / 3.0, 1.0 / 3.0], [1.0 / 3.0, 1.0 / 3.0]),
        ("skewed", [0.5, 0.3], [0.6, 0.3]),
        ("mixed", [0.1, 0.2], [0.25, 0.5]),
    ];
    let mut report = Report::default();
    report
        .push("suite", "appendix-b")
        .push("trials", trials)
        .push("seed", seed);
    let mut pass = true;
    for (i, (name, r, c)) in settings.into_iter().enumerate() {
        let full = |m: [f64; 2]| [m[0], m[1], 1.0 - m[0] - m[1]];
        let out = sweep_3x3(full(r), full(c), trials, seed.wrapping_add(i as u64))?;
        let ok = out.min_tau_star >= -1e-12 && out.descent_tau_star >= -1e-12;
        pass &= ok;
        report
            .push(format!("{name}_min_tau_star"), out.min_tau_star)
            .push(format!("{name}_descent_tau_star"), out.descent_tau_star)
            .push(format!("{name}_independence_hits"), out.independence_hits)
            .push(format!("{name}_result"), ok);
    }
    report.push("result", pass);
    Ok(Outcome { report, pass })
}

fn random_probs(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..k)
        .map(|_| -(1.0 - rng.random::<f64>()).ln() + 1e-3)
        .collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

fn random_scores(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let mut v = 0.0;
    (0..k)
        .map(|_| {
            v += rng.random_range(0.5..2.0);
            v
        })
        .collect()
}

fn fresh_value(rng: &mut ChaCha8Rng, v: &[f64]) -> f64 {
    match rng.random_range(0..=v.len()) {
        0 => v[0] - 1.0,
        s if s == v.len() => v[s - 1] + 1.0,
        s => 0.5 * (v[s - 1] + v[s]),
    }
}

fn mixture(seed: u64) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut positive = 0usize;
    let mut min_tau = f64::INFINITY;
    let mut cases = 0usize;
    for _ in 0..50 {
        let (r, c) = (rng.random_range(1..=4), rng.random_range(1..=4));
        let (xs, ys) = (random_scores(&mut rng, r), random_scores(&mut rng, c));
        let (pr, pc) = (random_probs(&mut rng, r), random_probs(&mut rng, c));
        let base = JointDistribution::product(&pr, &pc, xs.clone(), ys.clone())?;
        let (x0, y0) = (fresh_value(&mut rng, &xs), fresh_value(&mut rng, &ys));
        for p in [0.1, 0.5, 0.9] {
            let tau = pop_tau_star(&mix_with_point_mass(&base, x0, y0, p)?)?;
            min_tau = min_tau.min(tau);
            positive += usize::from(tau > 0.0);
            cases += 1;
        }
    }
    let pass = positive == cases;
    let mut report = Report::default();
    report
        .push("suite", "mixture")
        .push("seed", seed)
        .push("cases", cases)
        .push("positive", positive)
        .push("min_tau_star", min_tau)
        .push("result", pass);
    Ok(Outcome { report, pass })
}

fn counterexample() -> Result<Outcome> {
    let joint = counterexample_r8();
    let tau = pop_tau_star(&joint)?;
    let pass = tau < 0.0 && tau == -1.0 / 32.0;
    let mut report = Report::default();
    report
        .push("suite", "counterexample")
        .push("tau_star", tau)
        .push("enumerated_value", "-1/32")
        .push("half_scale_value", "-1/64")
        .push("negative", tau < 0.0)
        .push("result", pass);
    Ok(Outcome { report, pass })
}

fn identities(seed: u64) -> Result<Outcome> {
    let mut report = Report::default();
    report.push("suite", "identities").push("seed", seed);
    let mut pass = true;
    let mut check = |report: &mut Report, key: &str, value: f64, expected: f64| {
        let ok = (value - expected).abs() <= 1e-12;
        pass &= ok;
        report
            .push(key, value)
            .push(format!("{key}_expected"), expected);
    };

    let diagonal = JointDistribution::with_default_scores(vec![vec![0.5, 0.0], vec![0.0, 0.5]])?;
    check(
        &mut report,
        "diagonal_2x2_tau_star",
        pop_tau_star(&diagonal)?,
        0.25,
    );

    let v: Vec<f64> = (1..=4).map(f64::from).collect();
    let s = PairedSample::new(v.clone(), v)?;
    check(
        &mut report,
        "identity_n4_v_statistic",
        t_star(&s, &EstimatorConfig::default())?,
        13.0 / 32.0,
    );

    let v: Vec<f64> = (1..=10).map(f64::from).collect();
    let s = PairedSample::new(v.clone(), v)?;
    check(
        &mut report,
        "comonotone_n10_u_statistic",
        t_star(&s, &EstimatorConfig::exhaustive(Normalization::U))?,
        2.0 / 3.0,
    );

    // Three routes to tau* on random laws: kernel contraction, order
    // probabilities, and the two-row reduction.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gap_probs: f64 = 0.0;
    let mut gap_binary: f64 = 0.0;
    for _ in 0..100 {
        let (r, c) = (rng.random_range(1..=5), rng.random_range(1..=5));
        let probs = random_probs(&mut rng, r * c);
        let j = JointDistribution::from_flat(
            r,
            c,
            probs,
            Margin::Real(random_scores(&mut rng, r)),
            Margin::Real(random_scores(&mut rng, c)),
        )?;
        gap_probs = gap_probs.max((pop_tau_star(&j)? - pop_tau_star_from_probs(&j)?).abs());
        let probs = random_probs(&mut rng, 2 * c);
        let b = JointDistribution::from_flat(
            2,
            c,
            probs,
            Margin::Real(random_scores(&mut rng, 2)),
            Margin::Real(random_scores(&mut rng, c)),
        )?;
        gap_binary = gap_binary.max((pop_tau_star(&b)? - pop_tau_star_binary(&b)?).abs());
    }
    check(&mut report, "max_gap_order_probabilities", gap_probs, 0.0);
    check(&mut report, "max_gap_binary_reduction", gap_binary, 0.0);
    report.push("result", pass);
    Ok(Outcome { report, pass })
}
