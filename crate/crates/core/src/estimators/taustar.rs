//! The sample statistic `t*` and its normalized form.
//!
//! Three exact routes compute the V-statistic: the literal `n^4` kernel sum,
//! the table contraction, and a pair-count decomposition that runs in
//! `O(n^2)` when at least one margin is free of ties. All three return the
//! integer `n^4 t*` before the final division, so they agree bit for bit.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::sample::{dense_ranks, EstimatorConfig, Method, Normalization, PairedSample};
use super::table::t_star_from_table;
use crate::dataio::tabulate_sample;
use crate::error::{Error, Result};
use crate::kernels::a_sign;

/// Largest `n` for which the literal `n^4` sum is attempted when the pair
/// decomposition does not apply.
pub const MAX_NAIVE_N: usize = 200;

/// `n^4 t*` by direct summation over all index tuples.
pub fn t_star_naive_count(sample: &PairedSample) -> i64 {
    let (xs, ys) = (sample.xs(), sample.ys());
    let n = xs.len();
    let mut total = 0i64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let ax = a_sign(xs[i], xs[j], xs[k], xs[l]);
                    if ax != 0 {
                        total += (ax * a_sign(ys[i], ys[j], ys[k], ys[l])) as i64;
                    }
                }
            }
        }
    }
    total
}

/// `t*` (V form) by direct summation; the reference every faster route is
/// checked against.
pub fn t_star_naive(sample: &PairedSample) -> f64 {
    t_star_naive_count(sample) as f64 / (sample.len() as f64).powi(4)
}

/// `n^4 t*` from pair counts.
///
/// `split` holds dense ranks (`levels` distinct values, ties allowed) and
/// `free` is a permutation of `0..n`, i.e. ranks of a tie-free margin.
/// Writing `S1`, `S2` for the tuples with `split` separating `{1,2}` below
/// `{3,4}` and `free` separating them the same / opposite way, `T` for all
/// tuples with that `split` pattern and `Ty` for those among them on which
/// `free` has no strict 2-2 split,
///
/// ```text
/// n^4 t* = 6 (S1 + S2) - 2 T + 2 Ty.
/// ```
///
/// `Ty` only collects tuples with a repeated index because `free` has no ties.
pub(crate) fn pairwise_count(split: &[usize], levels: usize, free: &[usize]) -> i64 {
    let n = split.len();
    let w = n + 1;
    // below[u * w + v] = #{i : split_i < u, free_i < v}
    let mut below = vec![0i64; (levels + 1) * w];
    for (&a, &b) in split.iter().zip(free) {
        below[(a + 1) * w + (b + 1)] += 1;
    }
    for u in 1..=levels {
        for v in 1..=n {
            below[u * w + v] +=
                below[(u - 1) * w + v] + below[u * w + v - 1] - below[(u - 1) * w + v - 1];
        }
    }
    let at = |u: usize, v: usize| below[u * w + v];

    // T from the distribution of the smaller split level over ordered pairs.
    let mut at_least = vec![0i64; levels + 2];
    for &a in split {
        at_least[a] += 1;
    }
    for u in (0..levels).rev() {
        at_least[u] += at_least[u + 1];
    }
    let t: i64 = (0..levels)
        .map(|m| {
            let lower = at(m, n);
            lower * lower * (at_least[m] * at_least[m] - at_least[m + 1] * at_least[m + 1])
        })
        .sum();

    let mut s12 = 0i64;
    for k in 0..n {
        for l in 0..n {
            let u = split[k].min(split[l]);
            let lo = free[k].min(free[l]);
            let hi = free[k].max(free[l]);
            let same = at(u, lo);
            let opposite = at(u, n) - at(u, hi + 1);
            s12 += same * same + opposite * opposite;
        }
    }

    let mut ty = 0i64;
    for i in 0..n {
        let (a, b) = (split[i], free[i]);
        // Points strictly above in split: below / above in free.
        let up_lo = b as i64 - at(a + 1, b);
        let up_hi = (n - 1 - b) as i64 - (at(a + 1, n) - at(a + 1, b + 1));
        // Points strictly below in split.
        let down_lo = at(a, b);
        let down_hi = at(a, n) - at(a, b + 1);
        ty += 2 * (up_lo * up_hi + down_lo * down_hi);
    }

    6 * s12 - 2 * t + 2 * ty
}

fn is_tie_free(levels: usize, n: usize) -> bool {
    levels == n
}

/// `n^4 t*` through [`pairwise_count`], or `None` when both margins carry ties.
pub fn t_star_pairwise_count(sample: &PairedSample) -> Option<i64> {
    let (rx, dx) = dense_ranks(sample.xs());
    let (ry, dy) = dense_ranks(sample.ys());
    let n = sample.len();
    if is_tie_free(dy.len(), n) {
        Some(pairwise_count(&rx, dx.len(), &ry))
    } else if is_tie_free(dx.len(), n) {
        Some(pairwise_count(&ry, dy.len(), &rx))
    } else {
        None
    }
}

/// `t*` (V form) in `O(n^2)` when at least one margin is tie-free.
pub fn t_star_pairwise(sample: &PairedSample) -> Option<f64> {
    t_star_pairwise_count(sample).map(|c| c as f64 / (sample.len() as f64).powi(4))
}

/// Sum of `a(x)a(y)` over ordered tuples of distinct indices.
fn distinct_tuple_sum(sample: &PairedSample) -> i64 {
    let (xs, ys) = (sample.xs(), sample.ys());
    let n = xs.len();
    let mut total = 0i64;
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            for k in (0..n).filter(|&k| k != i && k != j) {
                for l in (0..n).filter(|&l| l != i && l != j && l != k) {
                    let ax = a_sign(xs[i], xs[j], xs[k], xs[l]);
                    if ax != 0 {
                        total += (ax * a_sign(ys[i], ys[j], ys[k], ys[l])) as i64;
                    }
                }
            }
        }
    }
    total
}

/// Monte Carlo estimate of a four-point kernel average with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubsampleEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub draws: usize,
}

/// Draws `m` index tuples (with replacement from all `n^4` tuples for the V
/// target, uniformly among distinct-index tuples for the U target) and
/// averages `kernel` over them.
pub(crate) fn subsample_tuples(
    n: usize,
    m: usize,
    normalization: Normalization,
    seed: u64,
    mut kernel: impl FnMut(usize, usize, usize, usize) -> f64,
) -> Result<SubsampleEstimate> {
    if m == 0 {
        return Err(Error::invalid("subsample size m must be at least 1"));
    }
    if normalization == Normalization::U && n < 4 {
        return Err(Error::invalid(format!(
            "U-statistic needs n >= 4, got n = {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..m {
        let idx = loop {
            let t: [usize; 4] = std::array::from_fn(|_| rng.random_range(0..n));
            let distinct = t[0] != t[1]
                && t[0] != t[2]
                && t[0] != t[3]
                && t[1] != t[2]
                && t[1] != t[3]
                && t[2] != t[3];
            if normalization == Normalization::V || distinct {
                break t;
            }
        };
        let v = kernel(idx[0], idx[1], idx[2], idx[3]);
        sum += v;
        sum_sq += v * v;
    }
    let mf = m as f64;
    let mean = sum / mf;
    let var = if m > 1 {
        ((sum_sq - mf * mean * mean) / (mf - 1.0)).max(0.0)
    } else {
        0.0
    };
    Ok(SubsampleEstimate {
        estimate: mean,
        std_error: (var / mf).sqrt(),
        draws: m,
    })
}

/// Subsampled `t*` with its Monte Carlo standard error.
pub fn t_star_subsample(
    sample: &PairedSample,
    m: usize,
    normalization: Normalization,
    seed: u64,
) -> Result<SubsampleEstimate> {
    let (xs, ys) = (sample.xs(), sample.ys());
    subsample_tuples(sample.len(), m, normalization, seed, |i, j, k, l| {
        (a_sign(xs[i], xs[j], xs[k], xs[l]) * a_sign(ys[i], ys[j], ys[k], ys[l])) as f64
    })
}

/// Exact `n^4 t*`, by pair counts when possible and by direct summation
/// otherwise.
fn t_star_v_count(sample: &PairedSample) -> Result<i64> {
    if let Some(c) = t_star_pairwise_count(sample) {
        return Ok(c);
    }
    if sample.len() > MAX_NAIVE_N {
        return Err(Error::resource(format!(
            "exhaustive t* on n = {} with ties in both margins exceeds n = {MAX_NAIVE_N}; use the table or subsample method",
            sample.len()
        )));
    }
    Ok(t_star_naive_count(sample))
}

/// The sample statistic `t*`.
pub fn t_star(sample: &PairedSample, config: &EstimatorConfig) -> Result<f64> {
    let n = sample.len();
    config.validate(n)?;
    match (config.method, config.normalization) {
        (Method::Exhaustive, Normalization::V) => {
            Ok(t_star_v_count(sample)? as f64 / (n as f64).powi(4))
        }
        (Method::Exhaustive, Normalization::U) => {
            if n > MAX_NAIVE_N {
                return Err(Error::resource(format!(
                    "exhaustive U-statistic on n = {n} exceeds n = {MAX_NAIVE_N}"
                )));
            }
            let tuples = (n * (n - 1) * (n - 2) * (n - 3)) as f64;
            Ok(distinct_tuple_sum(sample) as f64 / tuples)
        }
        (Method::Table, _) => t_star_from_table(&tabulate_sample(sample)),
        (Method::Subsample(m), norm) => {
            Ok(t_star_subsample(sample, m, norm, config.seed)?.estimate)
        }
    }
}

/// `t*(x, y) / sqrt(t*(x, x) t*(y, y))` with V-form `t*`; lies in `[-1, 1]`.
pub fn t_star_b(sample: &PairedSample) -> Result<f64> {
    let cfg = EstimatorConfig::default();
    let xx = PairedSample::new(sample.xs().to_vec(), sample.xs().to_vec())?;
    let yy = PairedSample::new(sample.ys().to_vec(), sample.ys().to_vec())?;
    let dx = t_star(&xx, &cfg)?;
    let dy = t_star(&yy, &cfg)?;
    if dx <= 0.0 || dy <= 0.0 {
        return Err(Error::degenerate(
            "t*_b undefined: a margin has t*(z, z) = 0 (constant margin)",
        ));
    }
    let r = t_star(sample, &cfg)? / (dx * dy).sqrt();
    Ok(r.clamp(-1.0, 1.0))
}
