use crate::error::{ensure_finite, Error, Result};

/// `n` paired real observations `(x_i, y_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedSample {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl PairedSample {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::invalid(format!(
                "paired sample: {} x-values but {} y-values",
                xs.len(),
                ys.len()
            )));
        }
        if xs.is_empty() {
            return Err(Error::invalid(
                "paired sample: at least one observation is required",
            ));
        }
        ensure_finite(&xs, "paired sample xs")?;
        ensure_finite(&ys, "paired sample ys")?;
        Ok(Self { xs, ys })
    }

    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        let (xs, ys) = pairs.iter().copied().unzip();
        Self::new(xs, ys)
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// The sample with the roles of x and y exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            xs: self.ys.clone(),
            ys: self.xs.clone(),
        }
    }

    /// The sample `(x_i, y_{perm[i]})`. `perm` must be a permutation of `0..n`.
    pub fn with_permuted_ys(&self, perm: &[usize]) -> Self {
        debug_assert_eq!(perm.len(), self.len());
        Self {
            xs: self.xs.clone(),
            ys: perm.iter().map(|&p| self.ys[p]).collect(),
        }
    }

    pub fn pairs(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.iter().copied().zip(self.ys.iter().copied())
    }
}

/// Evaluation strategy for the four-point kernel statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Exact average over every index tuple.
    Exhaustive,
    /// Exact evaluation through the tabulated sample (V form only).
    Table,
    /// Monte Carlo average over `m` uniformly drawn index tuples.
    Subsample(usize),
}

/// Which index tuples the kernel average runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Normalization {
    /// All `n^4` tuples (V-statistic).
    #[default]
    V,
    /// Ordered tuples of four distinct indices (U-statistic).
    U,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EstimatorConfig {
    pub method: Method,
    pub normalization: Normalization,
    /// Only consulted by [`Method::Subsample`].
    pub seed: u64,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        Self {
            method: Method::Exhaustive,
            normalization: Normalization::V,
            seed: 0,
        }
    }
}

impl EstimatorConfig {
    pub fn exhaustive(normalization: Normalization) -> Self {
        Self {
            normalization,
            ..Self::default()
        }
    }

    pub fn table() -> Self {
        Self {
            method: Method::Table,
            ..Self::default()
        }
    }

    pub fn subsample(m: usize, normalization: Normalization, seed: u64) -> Self {
        Self {
            method: Method::Subsample(m),
            normalization,
            seed,
        }
    }

    pub(crate) fn validate(&self, n: usize) -> Result<()> {
        if let Method::Subsample(0) = self.method {
            return Err(Error::invalid("subsample size m must be at least 1"));
        }
        if self.normalization == Normalization::U {
            if n < 4 {
                return Err(Error::invalid(format!(
                    "U-statistic needs n >= 4, got n = {n}"
                )));
            }
            if self.method == Method::Table {
                return Err(Error::invalid("the table method evaluates the V form only"));
            }
        }
        Ok(())
    }
}

/// Dense ranks: `ranks[i]` is the position of `values[i]` among the sorted
/// distinct values, returned alongside.
pub(crate) fn dense_ranks(values: &[f64]) -> (Vec<usize>, Vec<f64>) {
    let mut distinct = values.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    let ranks = values
        .iter()
        .map(|v| distinct.partition_point(|d| d < v))
        .collect();
    (ranks, distinct)
}

/// `2n` times the mid-distribution function at each observation:
/// `#{j: v_j < v_i} + #{j: v_j <= v_i}`.
pub(crate) fn scaled_mid_grades(values: &[f64]) -> Vec<i64> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    values
        .iter()
        .map(|v| {
            let below = sorted.partition_point(|s| s < v);
            let at_or_below = sorted.partition_point(|s| s <= v);
            (below + at_or_below) as i64
        })
        .collect()
}
