//! Contingency tables and the quadruple contraction engine shared by the
//! tabulated sample statistics and the population functionals.

use crate::error::{ensure_finite, Error, Result};
use crate::kernels::{a_sign, a_sign_metric, h_value, KernelId};

/// `r x c` table of nonnegative counts with strictly increasing row and
/// column scores.
#[derive(Debug, Clone, PartialEq)]
pub struct ContingencyTable {
    rows: usize,
    cols: usize,
    counts: Vec<u64>,
    row_scores: Vec<f64>,
    col_scores: Vec<f64>,
}

pub(crate) fn check_increasing(scores: &[f64], what: &str) -> Result<()> {
    ensure_finite(scores, what)?;
    if scores.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid(format!(
            "{what} must be strictly increasing"
        )));
    }
    Ok(())
}

impl ContingencyTable {
    /// Builds a table from rows of counts; scores default to `1..=r` and `1..=c`.
    pub fn new(
        counts: Vec<Vec<u64>>,
        row_scores: Option<Vec<f64>>,
        col_scores: Option<Vec<f64>>,
    ) -> Result<Self> {
        let rows = counts.len();
        if rows == 0 {
            return Err(Error::invalid("contingency table needs at least one row"));
        }
        let cols = counts[0].len();
        if cols == 0 {
            return Err(Error::invalid(
                "contingency table needs at least one column",
            ));
        }
        if let Some(i) = counts.iter().position(|r| r.len() != cols) {
            return Err(Error::invalid(format!(
                "ragged table: row {} has {} entries, expected {cols}",
                i + 1,
                counts[i].len()
            )));
        }
        let row_scores = row_scores.unwrap_or_else(|| (1..=rows).map(|v| v as f64).collect());
        let col_scores = col_scores.unwrap_or_else(|| (1..=cols).map(|v| v as f64).collect());
        if row_scores.len() != rows || col_scores.len() != cols {
            return Err(Error::invalid(
                "score vectors must match the table dimensions",
            ));
        }
        check_increasing(&row_scores, "row scores")?;
        check_increasing(&col_scores, "column scores")?;
        Ok(Self {
            rows,
            cols,
            counts: counts.into_iter().flatten().collect(),
            row_scores,
            col_scores,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn count(&self, i: usize, j: usize) -> u64 {
        self.counts[i * self.cols + j]
    }

    /// Row-major counts.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn row_scores(&self) -> &[f64] {
        &self.row_scores
    }

    pub fn col_scores(&self) -> &[f64] {
        &self.col_scores
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn row_margins(&self) -> Vec<u64> {
        self.counts
            .chunks(self.cols)
            .map(|r| r.iter().sum())
            .collect()
    }

    pub fn col_margins(&self) -> Vec<u64> {
        let mut m = vec![0; self.cols];
        for row in self.counts.chunks(self.cols) {
            for (acc, c) in m.iter_mut().zip(row) {
                *acc += c;
            }
        }
        m
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        self.counts.chunks(self.cols).map(<[u64]>::to_vec).collect()
    }
}

/// Largest number of categories per margin accepted by the contraction
/// engine; the kernel tensors hold `k^4` entries.
pub const MAX_CATEGORIES: usize = 40;

pub(crate) fn guard_categories(k: usize, what: &str) -> Result<()> {
    if k > MAX_CATEGORIES {
        return Err(Error::resource(format!(
            "{what}: {k} categories exceed the contraction limit of {MAX_CATEGORIES}"
        )));
    }
    Ok(())
}

/// `k^4` tensor of a kernel evaluated on category values, index order
/// `((i1 * k + i2) * k + i3) * k + i4`.
pub(crate) fn kernel_tensor(
    values: &[f64],
    kernel: impl Fn(f64, f64, f64, f64) -> f64,
) -> Vec<f64> {
    let k = values.len();
    let mut t = Vec::with_capacity(k.pow(4));
    for &a in values {
        for &b in values {
            for &c in values {
                for &d in values {
                    t.push(kernel(a, b, c, d));
                }
            }
        }
    }
    t
}

pub(crate) fn sign_tensor(values: &[f64]) -> Vec<f64> {
    kernel_tensor(values, |a, b, c, d| a_sign(a, b, c, d) as f64)
}

pub(crate) fn h_tensor(values: &[f64]) -> Vec<f64> {
    kernel_tensor(values, h_value)
}

pub(crate) fn metric_sign_tensor(points: &[Vec<f64>]) -> Vec<f64> {
    let k = points.len();
    let mut t = Vec::with_capacity(k.pow(4));
    for a in points {
        for b in points {
            for c in points {
                for d in points {
                    t.push(a_sign_metric(a, b, c, d) as f64);
                }
            }
        }
    }
    t
}

/// Computes `sum over (i1..i4, j1..j4) of prod_t w[i_t, j_t] * kx[i] * ky[j]`
/// for a row-major `rows x cols` weight matrix.
///
/// The `j` indices are contracted one at a time against `w`, so the cost is
/// `sum_k rows^k cols^(5-k)` rather than `rows^4 cols^4`.
pub(crate) fn contract_quadruple(
    weights: &[f64],
    rows: usize,
    cols: usize,
    kx: &[f64],
    ky: &[f64],
) -> f64 {
    debug_assert_eq!(weights.len(), rows * cols);
    debug_assert_eq!(kx.len(), rows.pow(4));
    debug_assert_eq!(ky.len(), cols.pow(4));

    // wt[j * rows + i] = w[i, j]
    let mut wt = vec![0.0; rows * cols];
    for i in 0..rows {
        for j in 0..cols {
            wt[j * rows + i] = weights[i * cols + j];
        }
    }

    let mut current = ky.to_vec();
    let mut rest = cols.pow(3);
    for step in 0..4 {
        // current has shape [cols, rest]; next has shape [rest, rows].
        let mut next = vec![0.0; rest * rows];
        for j in 0..cols {
            let w_row = &wt[j * rows..(j + 1) * rows];
            let src = &current[j * rest..(j + 1) * rest];
            for (q, &s) in src.iter().enumerate() {
                if s == 0.0 {
                    continue;
                }
                let dst = &mut next[q * rows..(q + 1) * rows];
                for (d, &w) in dst.iter_mut().zip(w_row) {
                    *d += s * w;
                }
            }
        }
        current = next;
        if step < 3 {
            rest = rest / cols * rows;
        }
    }
    current.iter().zip(kx).map(|(m, k)| m * k).sum()
}

/// Mid-distribution grades of each category of a margin, scaled by `2n`:
/// `2 * (mass strictly below) + (mass at the category)`.
pub(crate) fn scaled_category_grades(margin: &[u64]) -> Vec<f64> {
    let mut below = 0u64;
    margin
        .iter()
        .map(|&m| {
            let g = 2 * below + m;
            below += m;
            g as f64
        })
        .collect()
}

/// Quadruple contraction of the empirical joint law of `table` with `kernel`
/// applied to row and column categories. [`KernelId::SignA`] gives the
/// V-statistic `t*`; [`KernelId::GradeH`] gives the V-statistic `D` with
/// mid-distribution grades.
pub fn table_quadruple_contraction(table: &ContingencyTable, kernel: KernelId) -> Result<f64> {
    let n = table.total();
    if n == 0 {
        return Err(Error::invalid("table contraction of an empty table"));
    }
    guard_categories(table.rows(), "table rows")?;
    guard_categories(table.cols(), "table columns")?;
    let weights: Vec<f64> = table.counts().iter().map(|&c| c as f64).collect();
    let nf = n as f64;
    let n4 = nf.powi(4);
    Ok(match kernel {
        KernelId::SignA => {
            let kx = sign_tensor(table.row_scores());
            let ky = sign_tensor(table.col_scores());
            contract_quadruple(&weights, table.rows(), table.cols(), &kx, &ky) / n4
        }
        KernelId::GradeH => {
            let kx = h_tensor(&scaled_category_grades(&table.row_margins()));
            let ky = h_tensor(&scaled_category_grades(&table.col_margins()));
            contract_quadruple(&weights, table.rows(), table.cols(), &kx, &ky)
                / (n4 * 4.0 * nf * nf)
        }
    })
}

/// V-statistic `t*` of the sample a table tabulates, by contraction over
/// cell quadruples. Cost depends on the table shape only, not on `n`.
pub fn t_star_from_table(table: &ContingencyTable) -> Result<f64> {
    table_quadruple_contraction(table, KernelId::SignA)
}

/// Precomputed kernel tensors for repeated contraction against tables that
/// share their categories, as in permutation resampling.
#[derive(Debug, Clone)]
pub(crate) struct TableContraction {
    pub rows: usize,
    pub cols: usize,
    kx: Vec<f64>,
    ky: Vec<f64>,
}

impl TableContraction {
    pub fn new(rows: usize, cols: usize, kx: Vec<f64>, ky: Vec<f64>) -> Self {
        Self { rows, cols, kx, ky }
    }

    pub fn evaluate(&self, weights: &[f64]) -> f64 {
        contract_quadruple(weights, self.rows, self.cols, &self.kx, &self.ky)
    }
}
