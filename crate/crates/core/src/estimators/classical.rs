//! Kendall's t, Pearson's chi-square, Hoeffding's H and the two-sample
//! Cramér–von Mises statistic.

use super::sample::PairedSample;
use super::table::ContingencyTable;
use crate::error::{ensure_finite, Error, Result};
use crate::kernels::phi_value;

fn sign(d: f64) -> i64 {
    if d > 0.0 {
        1
    } else if d < 0.0 {
        -1
    } else {
        0
    }
}

/// `sum_{i,j} sign(x_i - x_j) sign(y_i - y_j)`, twice the concordant minus
/// discordant pair count.
fn kendall_count(xs: &[f64], ys: &[f64]) -> i64 {
    let n = xs.len();
    let mut total = 0;
    for i in 0..n {
        for j in 0..i {
            total += sign(xs[i] - xs[j]) * sign(ys[i] - ys[j]);
        }
    }
    2 * total
}

/// Kendall's t normalized by `n^2`, so a tie-free monotone sample gives
/// `(n - 1) / n`.
pub fn kendall_t(sample: &PairedSample) -> f64 {
    let n = sample.len() as f64;
    kendall_count(sample.xs(), sample.ys()) as f64 / (n * n)
}

/// Pearson's `sum (O - E)^2 / E`. Empty rows or columns are rejected.
pub fn pearson_chi_square(table: &ContingencyTable) -> Result<f64> {
    let rows = table.row_margins();
    let cols = table.col_margins();
    if rows.contains(&0) || cols.contains(&0) {
        return Err(Error::degenerate(
            "chi-square needs positive row and column totals; drop empty categories first",
        ));
    }
    let n = table.total() as f64;
    let mut stat = 0.0;
    for (i, &ri) in rows.iter().enumerate() {
        for (j, &cj) in cols.iter().enumerate() {
            let expected = ri as f64 * cj as f64 / n;
            let diff = table.count(i, j) as f64 - expected;
            stat += diff * diff / expected;
        }
    }
    Ok(stat)
}

/// Integer `n^5 H` with "<=" empirical distribution functions.
pub(crate) fn hoeffding_count(xs: &[f64], ys: &[f64]) -> i128 {
    let n = xs.len();
    let mut total = 0i128;
    for i in 0..n {
        let (mut n1, mut n2, mut n12) = (0i128, 0i128, 0i128);
        for j in 0..n {
            let bx = xs[j] <= xs[i];
            let by = ys[j] <= ys[i];
            n1 += bx as i128;
            n2 += by as i128;
            n12 += (bx && by) as i128;
        }
        let d = n as i128 * n12 - n1 * n2;
        total += d * d;
    }
    total
}

/// Plug-in Hoeffding H: the mean over observations of
/// `(F12(x_i, y_i) - F1(x_i) F2(y_i))^2`.
pub fn hoeffding_h(sample: &PairedSample) -> f64 {
    let n = sample.len() as f64;
    hoeffding_count(sample.xs(), sample.ys()) as f64 / n.powi(5)
}

/// H through the five-point `phi` kernel, summed over all `n^5` index tuples.
/// Cost grows as `n^5`.
pub fn hoeffding_h_oracle(sample: &PairedSample) -> Result<f64> {
    let n = sample.len();
    if n < 5 {
        return Err(Error::invalid(format!(
            "the five-point form needs n >= 5, got n = {n}"
        )));
    }
    let (xs, ys) = (sample.xs(), sample.ys());
    let mut total = 0i64;
    for i1 in 0..n {
        for i2 in 0..n {
            for i3 in 0..n {
                let first = phi_value(xs[i1], xs[i2], xs[i3]) * phi_value(ys[i1], ys[i2], ys[i3]);
                if first == 0 {
                    continue;
                }
                for i4 in 0..n {
                    for i5 in 0..n {
                        let second =
                            phi_value(xs[i1], xs[i4], xs[i5]) * phi_value(ys[i1], ys[i4], ys[i5]);
                        total += (first * second) as i64;
                    }
                }
            }
        }
    }
    Ok(total as f64 / (4.0 * (n as f64).powi(5)))
}

/// Two-sample Cramér–von Mises distance: `sum_z (G(z) - H(z))^2 w(z)` over
/// the pooled atoms, with "<=" empirical distribution functions and `w` the
/// pooled empirical mass.
pub fn cvm_statistic(u: &[f64], v: &[f64]) -> Result<f64> {
    if u.is_empty() || v.is_empty() {
        return Err(Error::invalid(
            "Cramér–von Mises statistic needs two nonempty samples",
        ));
    }
    ensure_finite(u, "first sample")?;
    ensure_finite(v, "second sample")?;
    let mut su = u.to_vec();
    let mut sv = v.to_vec();
    su.sort_by(f64::total_cmp);
    sv.sort_by(f64::total_cmp);
    let mut pooled: Vec<f64> = su.iter().chain(&sv).copied().collect();
    pooled.sort_by(f64::total_cmp);
    let total = pooled.len() as f64;
    let mut stat = 0.0;
    let mut start = 0;
    while start < pooled.len() {
        let z = pooled[start];
        let end = start + pooled[start..].partition_point(|&p| p == z);
        let g = su.partition_point(|&s| s <= z) as f64 / su.len() as f64;
        let h = sv.partition_point(|&s| s <= z) as f64 / sv.len() as f64;
        stat += (g - h) * (g - h) * (end - start) as f64 / total;
        start = end;
    }
    Ok(stat)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(xs: &[f64], ys: &[f64]) -> PairedSample {
        PairedSample::new(xs.to_vec(), ys.to_vec()).unwrap()
    }

    #[test]
    fn kendall_examples() {
        let up = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(kendall_t(&sample(&up, &up)), 0.75);
        assert_eq!(kendall_t(&sample(&up, &[4.0, 3.0, 2.0, 1.0])), -0.75);
        assert_eq!(kendall_t(&sample(&up, &[2.0; 4])), 0.0);
    }

    #[test]
    fn chi_square_examples() {
        let t = |c: Vec<Vec<u64>>| ContingencyTable::new(c, None, None).unwrap();
        assert_eq!(
            pearson_chi_square(&t(vec![vec![1, 1], vec![1, 1]])).unwrap(),
            0.0
        );
        assert_eq!(
            pearson_chi_square(&t(vec![vec![2, 0], vec![0, 2]])).unwrap(),
            4.0
        );
        assert_eq!(
            pearson_chi_square(&t(vec![vec![1, 0], vec![0, 1]])).unwrap(),
            2.0
        );
        assert!(matches!(
            pearson_chi_square(&t(vec![vec![1, 0], vec![1, 0]])),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn hoeffding_examples() {
        assert_eq!(hoeffding_h(&sample(&[1.0, 3.0, 2.0], &[5.0; 3])), 0.0);
        let z = [0.0, 0.0, 1.0, 1.0];
        assert_eq!(hoeffding_h(&sample(&z, &z)), 1.0 / 32.0);
        let xs = [0.1, 0.5, 0.3, 0.9, 0.7, 0.2];
        assert!(hoeffding_h_oracle(&sample(&xs, &xs)).unwrap() > 0.0);
        assert_eq!(hoeffding_h_oracle(&sample(&xs, &[1.0; 6])).unwrap(), 0.0);
        assert!(hoeffding_h_oracle(&sample(&z, &z)).is_err());
    }

    #[test]
    fn hoeffding_routes_agree() {
        let xs = [0.1, 0.5, 0.3, 0.9, 0.7, 0.2, 0.5];
        let ys = [2.0, 1.0, 1.0, 3.0, 0.0, 2.0, 4.0];
        let s = sample(&xs, &ys);
        assert!((hoeffding_h(&s) - hoeffding_h_oracle(&s).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn cvm_examples() {
        assert_eq!(
            cvm_statistic(&[1.0, 2.0, 3.0], &[3.0, 1.0, 2.0]).unwrap(),
            0.0
        );
        // At z = 0: G = 1, H = 0, pooled mass 1/2. At z = 1 both are 1.
        assert_eq!(cvm_statistic(&[0.0], &[1.0]).unwrap(), 0.5);
        let (u, v) = ([0.2, 1.4, 0.9], [0.3, 0.3, 2.0, -1.0]);
        assert_eq!(
            cvm_statistic(&u, &v).unwrap(),
            cvm_statistic(&v, &u).unwrap()
        );
        assert!(cvm_statistic(&[], &[1.0]).is_err());
    }
}
