//! Named laws and constructions: point-mass mixtures, the eight-atom metric
//! law with negative `tau*`, two-row laws from conditional laws, and the
//! random `3 x 3` search for negative `tau*`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::cvm::DiscreteLaw;
use super::functionals::pop_tau_star;
use super::joint::{JointDistribution, Margin, PROBABILITY_SUM_TOLERANCE};
use crate::error::{Error, Result};

fn insert_value(values: &[f64], v: f64) -> (Vec<f64>, usize, bool) {
    match values.binary_search_by(|a| a.total_cmp(&v)) {
        Ok(i) => (values.to_vec(), i, false),
        Err(i) => {
            let mut out = values.to_vec();
            out.insert(i, v);
            (out, i, true)
        }
    }
}

/// The law of `(X', Y')` equal to `(X, Y)` with probability `p` and to the
/// point `(x0, y0)` otherwise. New category values are inserted in order.
pub fn mix_with_point_mass(
    joint: &JointDistribution,
    x0: f64,
    y0: f64,
    p: f64,
) -> Result<JointDistribution> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::invalid(format!(
            "mixture weight p must lie in (0, 1], got {p}"
        )));
    }
    if !x0.is_finite() || !y0.is_finite() {
        return Err(Error::invalid("mixture point must be finite"));
    }
    if p == 1.0 {
        return Ok(joint.clone());
    }
    let (xs, ys) = joint.real_values()?;
    let (rows, ix, new_row) = insert_value(xs, x0);
    let (cols, iy, new_col) = insert_value(ys, y0);
    let (r, c) = (rows.len(), cols.len());
    let mut probs = vec![0.0; r * c];
    for i in 0..joint.rows() {
        let ii = if new_row && i >= ix { i + 1 } else { i };
        for j in 0..joint.cols() {
            let jj = if new_col && j >= iy { j + 1 } else { j };
            probs[ii * c + jj] = p * joint.prob(i, j);
        }
    }
    probs[ix * c + iy] += 1.0 - p;
    JointDistribution::from_flat(r, c, probs, Margin::Real(rows), Margin::Real(cols))
}

/// Eight equally likely atoms with `X` in `R^8` and `Y` in `{0, 1}`.
///
/// `X = u_i` has `u_ii = 3`, `u_ij = -1` when `i != j` lie in the same half
/// `{1..4}` or `{5..8}` and `0` otherwise. `Y` is 0 on the first half and 1 on
/// the second. Within-half distances are `sqrt(32)`, across halves `sqrt(24)`.
pub fn counterexample_r8() -> JointDistribution {
    let points: Vec<Vec<f64>> = (0..8)
        .map(|i| {
            (0..8)
                .map(|j| match (i == j, i / 4 == j / 4) {
                    (true, _) => 3.0,
                    (false, true) => -1.0,
                    (false, false) => 0.0,
                })
                .collect()
        })
        .collect();
    let probs = (0..8)
        .map(|i| {
            if i < 4 {
                vec![0.125, 0.0]
            } else {
                vec![0.0, 0.125]
            }
        })
        .collect();
    JointDistribution::new(
        probs,
        Margin::Metric { dim: 8, points },
        Margin::Real(vec![0.0, 1.0]),
    )
    .expect("fixed construction is valid")
}

/// Two-row law with `P(X = 0) = p`, `Y | X = 0 ~ u` and `Y | X = 1 ~ v`,
/// on the union of the atoms of `u` and `v`.
pub fn binary_joint(p: f64, u: &DiscreteLaw, v: &DiscreteLaw) -> Result<JointDistribution> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::invalid(format!("p must lie in (0, 1), got {p}")));
    }
    let mut support: Vec<f64> = u.atoms().iter().chain(v.atoms()).copied().collect();
    support.sort_by(f64::total_cmp);
    support.dedup();
    let row =
        |law: &DiscreteLaw, w: f64| support.iter().map(|&z| w * law.mass(z)).collect::<Vec<_>>();
    let mut probs = row(u, p);
    probs.extend(row(v, 1.0 - p));
    let total: f64 = probs.iter().sum();
    for q in &mut probs {
        *q /= total;
    }
    JointDistribution::from_flat(
        2,
        support.len(),
        probs,
        Margin::Real(vec![0.0, 1.0]),
        Margin::Real(support),
    )
}

/// Outcome of [`sweep_3x3`].
#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub trials: usize,
    pub min_tau_star: f64,
    pub argmin_table: Vec<Vec<f64>>,
    /// Trials with `|tau*| <= 1e-12`.
    pub independence_hits: usize,
    /// `tau*` reached by the local descent started at the worst trial.
    pub descent_tau_star: f64,
}

const INDEPENDENCE_TOLERANCE: f64 = 1e-12;

fn check_marginal(m: &[f64; 3], what: &str) -> Result<()> {
    if m.iter().any(|&v| !(v.is_finite() && v > 0.0)) {
        return Err(Error::invalid(format!("{what} must be positive")));
    }
    let total: f64 = m.iter().sum();
    if (total - 1.0).abs() > PROBABILITY_SUM_TOLERANCE {
        return Err(Error::invalid(format!("{what} sum to {total}, not 1")));
    }
    Ok(())
}

fn tau_of(table: &[f64; 9]) -> f64 {
    let joint = JointDistribution::from_flat(
        3,
        3,
        table.to_vec(),
        Margin::Real(vec![1.0, 2.0, 3.0]),
        Margin::Real(vec![1.0, 2.0, 3.0]),
    );
    match joint {
        Ok(j) => pop_tau_star(&j).expect("3 x 3 is within every guard"),
        Err(_) => f64::INFINITY,
    }
}

/// Scales a positive matrix to the given margins.
fn sinkhorn(mut m: [f64; 9], rows: &[f64; 3], cols: &[f64; 3]) -> [f64; 9] {
    for _ in 0..10_000 {
        for i in 0..3 {
            let s: f64 = m[i * 3..i * 3 + 3].iter().sum();
            for j in 0..3 {
                m[i * 3 + j] *= rows[i] / s;
            }
        }
        let mut worst: f64 = 0.0;
        for j in 0..3 {
            let s = m[j] + m[3 + j] + m[6 + j];
            for i in 0..3 {
                m[i * 3 + j] *= cols[j] / s;
            }
        }
        for i in 0..3 {
            let s: f64 = m[i * 3..i * 3 + 3].iter().sum();
            worst = worst.max((s - rows[i]).abs());
        }
        if worst < 1e-15 {
            break;
        }
    }
    m
}

/// Moves mass `delta` around the rectangle `(i, j), (i, l), (k, l), (k, j)`,
/// which keeps both margins fixed.
fn exchange(m: &mut [f64; 9], i: usize, k: usize, j: usize, l: usize, delta: f64) {
    m[i * 3 + j] += delta;
    m[k * 3 + l] += delta;
    m[i * 3 + l] -= delta;
    m[k * 3 + j] -= delta;
}

fn exchange_range(m: &[f64; 9], i: usize, k: usize, j: usize, l: usize) -> (f64, f64) {
    let up = m[i * 3 + l].min(m[k * 3 + j]);
    let down = m[i * 3 + j].min(m[k * 3 + l]);
    (-down, up)
}

fn random_table(rng: &mut ChaCha8Rng, rows: &[f64; 3], cols: &[f64; 3]) -> [f64; 9] {
    let gamma = rng.random_range(0.5..6.0);
    let start: [f64; 9] = std::array::from_fn(|_| rng.random::<f64>().powf(gamma) + 1e-9);
    let mut m = sinkhorn(start, rows, cols);
    // Random exchange moves push some trials onto faces of the polytope.
    let moves = rng.random_range(0..4);
    for _ in 0..moves {
        let i = rng.random_range(0..3);
        let k = (i + rng.random_range(1..3)) % 3;
        let j = rng.random_range(0..3);
        let l = (j + rng.random_range(1..3)) % 3;
        let (lo, hi) = exchange_range(&m, i, k, j, l);
        let delta = if rng.random_bool(0.5) {
            lo + (hi - lo) * rng.random::<f64>()
        } else if rng.random_bool(0.5) {
            lo
        } else {
            hi
        };
        exchange(&mut m, i, k, j, l, delta);
        for v in &mut m {
            *v = v.max(0.0);
        }
    }
    m
}

fn descend(start: [f64; 9]) -> ([f64; 9], f64) {
    let mut best = start;
    let mut best_tau = tau_of(&best);
    let mut step: f64 = 0.05;
    let mut iterations = 0;
    while step > 1e-10 && iterations < 20_000 {
        iterations += 1;
        let mut improved = false;
        for (i, k) in [(0, 1), (0, 2), (1, 2)] {
            for (j, l) in [(0, 1), (0, 2), (1, 2)] {
                let (lo, hi) = exchange_range(&best, i, k, j, l);
                for delta in [step.min(hi), (-step).max(lo)] {
                    if delta == 0.0 {
                        continue;
                    }
                    let mut cand = best;
                    exchange(&mut cand, i, k, j, l, delta);
                    for v in &mut cand {
                        *v = v.max(0.0);
                    }
                    let t = tau_of(&cand);
                    if t < best_tau {
                        best = cand;
                        best_tau = t;
                        improved = true;
                    }
                }
            }
        }
        if !improved {
            step /= 2.0;
        }
    }
    (best, best_tau)
}

/// Searches `3 x 3` laws with fixed margins for negative `tau*`.
///
/// Trial 0 is the product law; the others are random points of the
/// transportation polytope. Trial `t` draws from stream `t` of the seed, so the
/// report does not depend on scheduling. A local descent along
/// margin-preserving exchange moves then starts from the worst trial.
pub fn sweep_3x3(
    row_marginals: [f64; 3],
    col_marginals: [f64; 3],
    trials: usize,
    seed: u64,
) -> Result<SweepReport> {
    check_marginal(&row_marginals, "row marginals")?;
    check_marginal(&col_marginals, "column marginals")?;
    if trials == 0 {
        return Err(Error::invalid("sweep needs at least one trial"));
    }
    let results: Vec<([f64; 9], f64)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let table = if t == 0 {
                std::array::from_fn(|c| row_marginals[c / 3] * col_marginals[c % 3])
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(t as u64);
                random_table(&mut rng, &row_marginals, &col_marginals)
            };
            (table, tau_of(&table))
        })
        .collect();
    let independence_hits = results
        .iter()
        .filter(|r| r.1.abs() <= INDEPENDENCE_TOLERANCE)
        .count();
    let (mut arg, mut min) = results
        .iter()
        .copied()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("at least one trial");
    let (descended, descent_tau) = descend(arg);
    if descent_tau < min {
        arg = descended;
        min = descent_tau;
    }
    Ok(SweepReport {
        trials,
        min_tau_star: min,
        argmin_table: arg.chunks(3).map(<[f64]>::to_vec).collect(),
        independence_hits,
        descent_tau_star: descent_tau,
    })
}
