//! The `D` statistic: the `h` kernel applied to marginal mid-grades.

use super::sample::{scaled_mid_grades, EstimatorConfig, Method, Normalization, PairedSample};
use super::table::table_quadruple_contraction;
use super::taustar::{subsample_tuples, MAX_NAIVE_N};
use crate::dataio::tabulate_sample;
use crate::error::{Error, Result};
use crate::kernels::KernelId;

fn h_int(z: &[i64], i: usize, j: usize, k: usize, l: usize) -> i64 {
    (z[i] - z[j]).abs() + (z[k] - z[l]).abs() - (z[i] - z[k]).abs() - (z[j] - z[l]).abs()
}

/// `n^4 (2n)^2 D` by direct summation over every index tuple, on grades
/// scaled by `2n`.
pub fn dewet_naive_count(sample: &PairedSample) -> i128 {
    let gx = scaled_mid_grades(sample.xs());
    let gy = scaled_mid_grades(sample.ys());
    let n = gx.len();
    let mut total = 0i128;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    total += (h_int(&gx, i, j, k, l) * h_int(&gy, i, j, k, l)) as i128;
                }
            }
        }
    }
    total
}

/// Pairwise distance matrix of scaled grades with its row sums and total.
pub(crate) struct GradeDistances {
    pub dist: Vec<i64>,
    pub row_sums: Vec<i64>,
    pub total: i64,
}

impl GradeDistances {
    pub fn new(grades: &[i64]) -> Self {
        let n = grades.len();
        let mut dist = vec![0i64; n * n];
        for i in 0..n {
            for j in 0..n {
                dist[i * n + j] = (grades[i] - grades[j]).abs();
            }
        }
        let row_sums: Vec<i64> = dist.chunks(n).map(|r| r.iter().sum()).collect();
        let total = row_sums.iter().sum();
        Self {
            dist,
            row_sums,
            total,
        }
    }
}

/// `n^4 (2n)^2 D` from the two distance matrices, with `y` observation `i`
/// taken from position `perm(i)`:
/// `4 n^2 sum A_ij B_ij + 4 SA SB - 8 n sum a_i b_i`.
pub(crate) fn dewet_expansion(
    a: &GradeDistances,
    b: &GradeDistances,
    perm: impl Fn(usize) -> usize,
) -> i128 {
    let n = a.row_sums.len();
    let mut cross = 0i128;
    let mut rows = 0i128;
    for i in 0..n {
        let pi = perm(i);
        let arow = &a.dist[i * n..(i + 1) * n];
        let brow = &b.dist[pi * n..(pi + 1) * n];
        let s: i64 = arow
            .iter()
            .enumerate()
            .map(|(j, &v)| v * brow[perm(j)])
            .sum();
        cross += s as i128;
        rows += a.row_sums[i] as i128 * b.row_sums[pi] as i128;
    }
    let n = n as i128;
    4 * n * n * cross + 4 * a.total as i128 * b.total as i128 - 8 * n * rows
}

pub(crate) fn dewet_scale(n: usize) -> f64 {
    let n = n as f64;
    n.powi(4) * 4.0 * n * n
}

/// `D` in `O(n^2)` (V form).
pub fn dewet_fast(sample: &PairedSample) -> f64 {
    let a = GradeDistances::new(&scaled_mid_grades(sample.xs()));
    let b = GradeDistances::new(&scaled_mid_grades(sample.ys()));
    dewet_expansion(&a, &b, |i| i) as f64 / dewet_scale(sample.len())
}

/// The `D` statistic with grades `(#{x_j < x} + #{x_j <= x}) / (2n)`.
pub fn dewet_d(sample: &PairedSample, config: &EstimatorConfig) -> Result<f64> {
    let n = sample.len();
    config.validate(n)?;
    match (config.method, config.normalization) {
        (Method::Exhaustive, Normalization::V) => Ok(dewet_fast(sample)),
        (Method::Exhaustive, Normalization::U) => {
            if n > MAX_NAIVE_N {
                return Err(Error::resource(format!(
                    "exhaustive U-statistic on n = {n} exceeds n = {MAX_NAIVE_N}"
                )));
            }
            let gx = scaled_mid_grades(sample.xs());
            let gy = scaled_mid_grades(sample.ys());
            let mut total = 0i128;
            for i in 0..n {
                for j in (0..n).filter(|&j| j != i) {
                    for k in (0..n).filter(|&k| k != i && k != j) {
                        for l in (0..n).filter(|&l| l != i && l != j && l != k) {
                            total += (h_int(&gx, i, j, k, l) * h_int(&gy, i, j, k, l)) as i128;
                        }
                    }
                }
            }
            let tuples = (n * (n - 1) * (n - 2) * (n - 3)) as f64;
            Ok(total as f64 / (tuples * 4.0 * (n * n) as f64))
        }
        (Method::Table, _) => {
            table_quadruple_contraction(&tabulate_sample(sample), KernelId::GradeH)
        }
        (Method::Subsample(m), norm) => {
            let gx = scaled_mid_grades(sample.xs());
            let gy = scaled_mid_grades(sample.ys());
            let scale = 4.0 * (n * n) as f64;
            let est = subsample_tuples(n, m, norm, config.seed, |i, j, k, l| {
                (h_int(&gx, i, j, k, l) * h_int(&gy, i, j, k, l)) as f64 / scale
            })?;
            Ok(est.estimate)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(xs: &[f64], ys: &[f64]) -> PairedSample {
        PairedSample::new(xs.to_vec(), ys.to_vec()).unwrap()
    }

    #[test]
    fn examples() {
        let cfg = EstimatorConfig::default();
        assert_eq!(
            dewet_d(&sample(&[1.0, 4.0, 2.0], &[3.0; 3]), &cfg).unwrap(),
            0.0
        );
        let up = [1.0, 2.0, 3.0, 4.0];
        let d = dewet_d(&sample(&up, &up), &cfg).unwrap();
        assert!(d > 0.0);
        let exp: Vec<f64> = up.iter().map(|v: &f64| v.exp()).collect();
        assert_eq!(dewet_d(&sample(&up, &exp), &cfg).unwrap(), d);
    }

    #[test]
    fn fast_matches_naive_with_ties() {
        let xs = [1.0, 1.0, 2.0, 3.0, 3.0, 0.5, 2.0];
        let ys = [0.3, 0.3, 0.7, 0.2, 0.9, 0.3, 0.6];
        let s = sample(&xs, &ys);
        let naive = dewet_naive_count(&s) as f64 / dewet_scale(s.len());
        assert_eq!(dewet_fast(&s), naive);
        let table = dewet_d(&s, &EstimatorConfig::table()).unwrap();
        assert!((table - naive).abs() < 1e-15);
    }
}
