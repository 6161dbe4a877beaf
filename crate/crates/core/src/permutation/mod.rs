//! Permutation tests of independence.
//!
//! The y-values are permuted against fixed x-values. Monte Carlo resample `b`
//! shuffles with stream `b` of a ChaCha8 generator seeded by the caller, so
//! results do not depend on how resamples are spread over threads.

mod statistic;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use statistic::{Prepared, Scratch};
pub use statistic::{Sidedness, StatisticId, CHI_SQUARE_TIE_TOLERANCE, MAX_TENSOR_N};

use crate::error::{Error, Result};
use crate::estimators::PairedSample;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    MonteCarlo,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::MonteCarlo => "monte-carlo",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TestResult {
    pub statistic_id: StatisticId,
    pub observed: f64,
    pub p_value: f64,
    /// Monte Carlo resamples, or the number of enumerated permutations.
    pub resamples: u64,
    /// Resamples at least as extreme as the observed value.
    pub exceed_count: u64,
    pub seed: u64,
    pub mode: Mode,
    pub sidedness: Sidedness,
}

/// Monte Carlo standard error `sqrt(p (1 - p) / B)` of a p-value estimate.
pub fn mc_stderr(p: f64, resamples: u64) -> f64 {
    if resamples == 0 {
        return f64::NAN;
    }
    (p * (1.0 - p) / resamples as f64).sqrt()
}

struct Comparator {
    threshold: f64,
    sidedness: Sidedness,
}

impl Comparator {
    fn new(observed: f64, sidedness: Sidedness, tolerance: f64) -> Self {
        let t = sidedness.transform(observed);
        Self {
            threshold: t - tolerance * t.abs().max(1.0),
            sidedness,
        }
    }

    fn exceeds(&self, value: f64) -> bool {
        self.sidedness.transform(value) >= self.threshold
    }
}

/// Uniform random permutation for resample `b`.
pub fn resample_permutation(n: usize, seed: u64, b: u64, out: &mut Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(b);
    out.clear();
    out.extend(0..n);
    out.shuffle(&mut rng);
}

/// Monte Carlo permutation test with `B = resamples` random permutations of
/// the y-values and p-value `(1 + #{t_b >= t_obs}) / (1 + B)`.
pub fn permutation_test(
    sample: &PairedSample,
    statistic: StatisticId,
    resamples: u64,
    seed: u64,
    sidedness: Sidedness,
) -> Result<TestResult> {
    if resamples == 0 {
        return Err(Error::invalid("the number of resamples must be at least 1"));
    }
    let prepared = Prepared::new(sample, statistic)?;
    let n = sample.len();
    let identity: Vec<usize> = (0..n).collect();
    let observed = prepared.evaluate(&identity, &mut Scratch::default());
    let cmp = Comparator::new(observed, sidedness, prepared.tie_tolerance());
    let exceed_count: u64 = (0..resamples)
        .into_par_iter()
        .map_init(
            || (Scratch::default(), Vec::with_capacity(n)),
            |(scratch, perm), b| {
                resample_permutation(n, seed, b, perm);
                cmp.exceeds(prepared.evaluate(perm, scratch)) as u64
            },
        )
        .sum();
    Ok(TestResult {
        statistic_id: statistic,
        observed,
        p_value: (1 + exceed_count) as f64 / (1 + resamples) as f64,
        resamples,
        exceed_count,
        seed,
        mode: Mode::MonteCarlo,
        sidedness,
    })
}

/// Largest sample size for complete enumeration (`8! = 40320`).
pub const MAX_EXACT_N: usize = 8;

/// Test over all `n!` permutations; the identity is among them, so the
/// p-value is at least `1 / n!`.
pub fn exact_permutation_test(
    sample: &PairedSample,
    statistic: StatisticId,
    sidedness: Sidedness,
) -> Result<TestResult> {
    let n = sample.len();
    if n > MAX_EXACT_N {
        return Err(Error::resource(format!(
            "exact enumeration of {n}! permutations exceeds the limit n = {MAX_EXACT_N}"
        )));
    }
    let prepared = Prepared::new(sample, statistic)?;
    let mut scratch = Scratch::default();
    let identity: Vec<usize> = (0..n).collect();
    let observed = prepared.evaluate(&identity, &mut scratch);
    let cmp = Comparator::new(observed, sidedness, prepared.tie_tolerance());
    let mut total = 0u64;
    let mut exceed_count = 0u64;
    for perm in (0..n).permutations(n) {
        total += 1;
        exceed_count += cmp.exceeds(prepared.evaluate(&perm, &mut scratch)) as u64;
    }
    Ok(TestResult {
        statistic_id: statistic,
        observed,
        p_value: exceed_count as f64 / total as f64,
        resamples: total,
        exceed_count,
        seed: 0,
        mode: Mode::Exact,
        sidedness,
    })
}

/// The statistic of `sample` as the engine computes it.
pub fn observed_statistic(sample: &PairedSample, statistic: StatisticId) -> Result<f64> {
    let prepared = Prepared::new(sample, statistic)?;
    let identity: Vec<usize> = (0..sample.len()).collect();
    Ok(prepared.evaluate(&identity, &mut Scratch::default()))
}
