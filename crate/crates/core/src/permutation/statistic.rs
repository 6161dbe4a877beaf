use std::fmt;
use std::str::FromStr;

use crate::dataio::tabulate_sample;
use crate::error::{Error, Result};
use crate::estimators::{
    dense_ranks, dewet_expansion, dewet_scale, hoeffding_count, pairwise_count, scaled_mid_grades,
    sign_tensor, GradeDistances, PairedSample, TableContraction,
};
use crate::kernels::a_sign;

/// Statistics the permutation engine can resample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StatisticId {
    /// `t*` on the raw sample.
    TauStar,
    /// `t*` through the tabulated sample.
    TauStarTable,
    Kendall,
    ChiSquare,
    Hoeffding,
    DeWet,
}

/// Direction of the rejection region.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sidedness {
    /// Reject for large values.
    OneSidedLarge,
    /// Reject for large absolute values.
    TwoSidedAbs,
}

impl Sidedness {
    pub fn name(self) -> &'static str {
        match self {
            Sidedness::OneSidedLarge => "one-sided-large",
            Sidedness::TwoSidedAbs => "two-sided-abs",
        }
    }

    pub(crate) fn transform(self, v: f64) -> f64 {
        match self {
            Sidedness::OneSidedLarge => v,
            Sidedness::TwoSidedAbs => v.abs(),
        }
    }
}

impl StatisticId {
    pub const ALL: [StatisticId; 6] = [
        StatisticId::TauStar,
        StatisticId::TauStarTable,
        StatisticId::Kendall,
        StatisticId::ChiSquare,
        StatisticId::Hoeffding,
        StatisticId::DeWet,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StatisticId::TauStar => "taustar",
            StatisticId::TauStarTable => "taustar_table",
            StatisticId::Kendall => "kendall",
            StatisticId::ChiSquare => "chisq",
            StatisticId::Hoeffding => "hoeffding",
            StatisticId::DeWet => "dewet",
        }
    }

    /// Kendall's t is tested two-sided, everything else one-sided.
    pub fn default_sidedness(self) -> Sidedness {
        match self {
            StatisticId::Kendall => Sidedness::TwoSidedAbs,
            _ => Sidedness::OneSidedLarge,
        }
    }
}

impl fmt::Display for StatisticId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StatisticId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StatisticId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = StatisticId::ALL.iter().map(|id| id.name()).collect();
                Error::invalid(format!(
                    "unknown statistic '{s}' (expected one of {})",
                    names.join(", ")
                ))
            })
    }
}

/// Largest `n` for which `t*` with ties in both margins is resampled through
/// `n^4` kernel tensors.
pub const MAX_TENSOR_N: usize = 48;

/// Relative tolerance when comparing chi-square values, which are not
/// computed exactly.
pub const CHI_SQUARE_TIE_TOLERANCE: f64 = 1e-10;

/// Per-statistic state that makes re-evaluation under a permutation of the
/// y-values cheap. `evaluate(perm)` is the statistic of `(x_i, y_perm[i])`.
pub(crate) enum Prepared {
    TauStarPairs {
        split: Vec<usize>,
        levels: usize,
        free: Vec<usize>,
        /// Whether the permuted margin is `free` (otherwise `split`).
        permute_free: bool,
        scale: f64,
    },
    TauStarTensor {
        n: usize,
        ax: Vec<i8>,
        ay: Vec<i8>,
        scale: f64,
    },
    Table {
        rx: Vec<usize>,
        ry: Vec<usize>,
        engine: TableContraction,
        scale: f64,
    },
    Kendall {
        sx: Vec<i8>,
        sy: Vec<i8>,
        scale: f64,
    },
    ChiSquare {
        rx: Vec<usize>,
        ry: Vec<usize>,
        rows: usize,
        cols: usize,
        /// `1 / (row margin * column margin)` per cell.
        inv_expected: Vec<f64>,
        n: f64,
    },
    Hoeffding {
        xs: Vec<f64>,
        ys: Vec<f64>,
        scale: f64,
    },
    DeWet {
        a: GradeDistances,
        b: GradeDistances,
        scale: f64,
    },
}

fn sign_tensor_of(values: &[f64]) -> Vec<i8> {
    let n = values.len();
    let mut t = Vec::with_capacity(n.pow(4));
    for &a in values {
        for &b in values {
            for &c in values {
                for &d in values {
                    t.push(a_sign(a, b, c, d));
                }
            }
        }
    }
    t
}

fn pair_signs(values: &[f64]) -> Vec<i8> {
    let n = values.len();
    let mut s = vec![0i8; n * n];
    for i in 0..n {
        for j in 0..n {
            s[i * n + j] = match values[i].partial_cmp(&values[j]) {
                Some(std::cmp::Ordering::Greater) => 1,
                Some(std::cmp::Ordering::Less) => -1,
                _ => 0,
            };
        }
    }
    s
}

impl Prepared {
    pub fn new(sample: &PairedSample, id: StatisticId) -> Result<Self> {
        let n = sample.len();
        let nf = n as f64;
        Ok(match id {
            StatisticId::TauStar => {
                let (rx, dx) = dense_ranks(sample.xs());
                let (ry, dy) = dense_ranks(sample.ys());
                let scale = nf.powi(4);
                if dy.len() == n {
                    Prepared::TauStarPairs {
                        split: rx,
                        levels: dx.len(),
                        free: ry,
                        permute_free: true,
                        scale,
                    }
                } else if dx.len() == n {
                    Prepared::TauStarPairs {
                        split: ry,
                        levels: dy.len(),
                        free: rx,
                        permute_free: false,
                        scale,
                    }
                } else if n <= MAX_TENSOR_N {
                    Prepared::TauStarTensor {
                        n,
                        ax: sign_tensor_of(sample.xs()),
                        ay: sign_tensor_of(sample.ys()),
                        scale,
                    }
                } else {
                    return Err(Error::resource(format!(
                        "taustar on n = {n} with ties in both margins needs n^4 work per resample \
                         (limit n = {MAX_TENSOR_N}); use taustar_table"
                    )));
                }
            }
            StatisticId::TauStarTable => {
                let table = tabulate_sample(sample);
                crate::estimators::guard_categories(table.rows(), "table rows")?;
                crate::estimators::guard_categories(table.cols(), "table columns")?;
                let (rx, _) = dense_ranks(sample.xs());
                let (ry, _) = dense_ranks(sample.ys());
                let engine = TableContraction::new(
                    table.rows(),
                    table.cols(),
                    sign_tensor(table.row_scores()),
                    sign_tensor(table.col_scores()),
                );
                Prepared::Table {
                    rx,
                    ry,
                    engine,
                    scale: nf.powi(4),
                }
            }
            StatisticId::Kendall => Prepared::Kendall {
                sx: pair_signs(sample.xs()),
                sy: pair_signs(sample.ys()),
                scale: nf * nf,
            },
            StatisticId::ChiSquare => {
                let table = tabulate_sample(sample);
                if table.rows() < 2 || table.cols() < 2 {
                    return Err(Error::degenerate(
                        "chi-square needs at least two distinct values in each margin",
                    ));
                }
                let (rx, _) = dense_ranks(sample.xs());
                let (ry, _) = dense_ranks(sample.ys());
                let (rm, cm) = (table.row_margins(), table.col_margins());
                let inv_expected = rm
                    .iter()
                    .flat_map(|&r| cm.iter().map(move |&c| 1.0 / (r as f64 * c as f64)))
                    .collect();
                Prepared::ChiSquare {
                    rx,
                    ry,
                    rows: table.rows(),
                    cols: table.cols(),
                    inv_expected,
                    n: nf,
                }
            }
            StatisticId::Hoeffding => Prepared::Hoeffding {
                xs: sample.xs().to_vec(),
                ys: sample.ys().to_vec(),
                scale: nf.powi(5),
            },
            StatisticId::DeWet => Prepared::DeWet {
                a: GradeDistances::new(&scaled_mid_grades(sample.xs())),
                b: GradeDistances::new(&scaled_mid_grades(sample.ys())),
                scale: dewet_scale(n),
            },
        })
    }

    /// Statistic of `(x_i, y_perm[i])`; `scratch` is reusable working space.
    pub fn evaluate(&self, perm: &[usize], scratch: &mut Scratch) -> f64 {
        match self {
            Prepared::TauStarPairs {
                split,
                levels,
                free,
                permute_free,
                scale,
            } => {
                let count = if *permute_free {
                    scratch.ranks.clear();
                    scratch.ranks.extend(perm.iter().map(|&p| free[p]));
                    pairwise_count(split, *levels, &scratch.ranks)
                } else {
                    scratch.ranks.clear();
                    scratch.ranks.extend(perm.iter().map(|&p| split[p]));
                    pairwise_count(&scratch.ranks, *levels, free)
                };
                count as f64 / scale
            }
            Prepared::TauStarTensor { n, ax, ay, scale } => {
                let n = *n;
                let mut total = 0i64;
                let mut idx = 0;
                for i in 0..n {
                    for j in 0..n {
                        for k in 0..n {
                            let base = ((perm[i] * n + perm[j]) * n + perm[k]) * n;
                            for l in 0..n {
                                let a = ax[idx];
                                idx += 1;
                                if a != 0 {
                                    total += (a * ay[base + perm[l]]) as i64;
                                }
                            }
                        }
                    }
                }
                total as f64 / scale
            }
            Prepared::Table {
                rx,
                ry,
                engine,
                scale,
            } => {
                scratch.weights.clear();
                scratch.weights.resize(engine.rows * engine.cols, 0.0);
                for (i, &p) in perm.iter().enumerate() {
                    scratch.weights[rx[i] * engine.cols + ry[p]] += 1.0;
                }
                engine.evaluate(&scratch.weights) / scale
            }
            Prepared::Kendall { sx, sy, scale } => {
                let n = perm.len();
                let mut total = 0i64;
                for i in 0..n {
                    let row = &sx[i * n..(i + 1) * n];
                    let yrow = &sy[perm[i] * n..(perm[i] + 1) * n];
                    for (j, &s) in row.iter().enumerate() {
                        total += (s * yrow[perm[j]]) as i64;
                    }
                }
                total as f64 / scale
            }
            Prepared::ChiSquare {
                rx,
                ry,
                rows,
                cols,
                inv_expected,
                n,
            } => {
                scratch.weights.clear();
                scratch.weights.resize(rows * cols, 0.0);
                for (i, &p) in perm.iter().enumerate() {
                    scratch.weights[rx[i] * cols + ry[p]] += 1.0;
                }
                // sum O^2 / E - n with E = r c / n
                let s: f64 = scratch
                    .weights
                    .iter()
                    .zip(inv_expected)
                    .map(|(o, w)| o * o * w)
                    .sum();
                n * s - n
            }
            Prepared::Hoeffding { xs, ys, scale } => {
                scratch.values.clear();
                scratch.values.extend(perm.iter().map(|&p| ys[p]));
                hoeffding_count(xs, &scratch.values) as f64 / scale
            }
            Prepared::DeWet { a, b, scale } => dewet_expansion(a, b, |i| perm[i]) as f64 / scale,
        }
    }

    /// Relative tolerance for counting a resample as tied with the observed value.
    pub fn tie_tolerance(&self) -> f64 {
        match self {
            Prepared::ChiSquare { .. } => CHI_SQUARE_TIE_TOLERANCE,
            _ => 0.0,
        }
    }
}

#[derive(Default)]
pub(crate) struct Scratch {
    ranks: Vec<usize>,
    weights: Vec<f64>,
    values: Vec<f64>,
}
