use crate::error::{ensure_finite, Error, Result};
use crate::estimators::{check_increasing, ContingencyTable};

/// Tolerance on the total probability of a joint law.
pub const PROBABILITY_SUM_TOLERANCE: f64 = 1e-12;

/// Category values of one margin.
#[derive(Debug, Clone, PartialEq)]
pub enum Margin {
    /// Strictly increasing real scores.
    Real(Vec<f64>),
    /// Pairwise distinct points of `R^dim` under the Euclidean metric.
    Metric { dim: usize, points: Vec<Vec<f64>> },
}

impl Margin {
    pub fn len(&self) -> usize {
        match self {
            Margin::Real(v) => v.len(),
            Margin::Metric { points, .. } => points.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_real(&self) -> bool {
        matches!(self, Margin::Real(_))
    }

    pub fn as_real(&self) -> Option<&[f64]> {
        match self {
            Margin::Real(v) => Some(v),
            Margin::Metric { .. } => None,
        }
    }

    fn validate(&self, what: &str) -> Result<()> {
        match self {
            Margin::Real(v) => check_increasing(v, what),
            Margin::Metric { dim, points } => {
                if *dim == 0 {
                    return Err(Error::invalid(format!(
                        "{what}: metric dimension must be at least 1"
                    )));
                }
                for (i, p) in points.iter().enumerate() {
                    if p.len() != *dim {
                        return Err(Error::invalid(format!(
                            "{what}: point {} has dimension {}, expected {dim}",
                            i + 1,
                            p.len()
                        )));
                    }
                    ensure_finite(p, what)?;
                    if points[..i].contains(p) {
                        return Err(Error::invalid(format!(
                            "{what}: point {} repeats an earlier point",
                            i + 1
                        )));
                    }
                }
                Ok(())
            }
        }
    }
}

/// Finite joint law of `(X, Y)`: an `r x c` probability table whose rows and
/// columns carry category values.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    rows: usize,
    cols: usize,
    probs: Vec<f64>,
    row_values: Margin,
    col_values: Margin,
}

impl JointDistribution {
    pub fn new(probs: Vec<Vec<f64>>, row_values: Margin, col_values: Margin) -> Result<Self> {
        let rows = probs.len();
        let cols = probs.first().map_or(0, Vec::len);
        if rows == 0 || cols == 0 {
            return Err(Error::invalid(
                "joint distribution needs at least one row and one column",
            ));
        }
        if probs.iter().any(|r| r.len() != cols) {
            return Err(Error::invalid(
                "joint distribution: ragged probability table",
            ));
        }
        let probs: Vec<f64> = probs.into_iter().flatten().collect();
        Self::from_flat(rows, cols, probs, row_values, col_values)
    }

    /// Builds a law from a row-major probability vector.
    pub fn from_flat(
        rows: usize,
        cols: usize,
        probs: Vec<f64>,
        row_values: Margin,
        col_values: Margin,
    ) -> Result<Self> {
        if probs.len() != rows * cols {
            return Err(Error::invalid(format!(
                "joint distribution: {} probabilities for a {rows} x {cols} table",
                probs.len()
            )));
        }
        if row_values.len() != rows || col_values.len() != cols {
            return Err(Error::invalid(
                "joint distribution: category values do not match the table shape",
            ));
        }
        ensure_finite(&probs, "joint probabilities")?;
        if probs.iter().any(|&p| p < 0.0) {
            return Err(Error::invalid("joint probabilities must be nonnegative"));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > PROBABILITY_SUM_TOLERANCE {
            return Err(Error::invalid(format!(
                "joint probabilities sum to {total}, not 1"
            )));
        }
        row_values.validate("row values")?;
        col_values.validate("column values")?;
        Ok(Self {
            rows,
            cols,
            probs,
            row_values,
            col_values,
        })
    }

    /// Real-valued law with default scores `1..=r` and `1..=c`.
    pub fn with_default_scores(probs: Vec<Vec<f64>>) -> Result<Self> {
        let rows = probs.len();
        let cols = probs.first().map_or(0, Vec::len);
        let scores = |k: usize| Margin::Real((1..=k).map(|v| v as f64).collect());
        Self::new(probs, scores(rows), scores(cols))
    }

    /// Product law of two marginal probability vectors on the given scores.
    pub fn product(
        row_probs: &[f64],
        col_probs: &[f64],
        row_scores: Vec<f64>,
        col_scores: Vec<f64>,
    ) -> Result<Self> {
        let probs = row_probs
            .iter()
            .flat_map(|&p| col_probs.iter().map(move |&q| p * q))
            .collect();
        Self::from_flat(
            row_probs.len(),
            col_probs.len(),
            probs,
            Margin::Real(row_scores),
            Margin::Real(col_scores),
        )
    }

    /// Empirical law of a tabulated sample.
    pub fn from_table(table: &ContingencyTable) -> Result<Self> {
        let n = table.total();
        if n == 0 {
            return Err(Error::invalid("empirical law of an empty table"));
        }
        let probs = table
            .counts()
            .iter()
            .map(|&c| c as f64 / n as f64)
            .collect();
        Self::from_flat(
            table.rows(),
            table.cols(),
            probs,
            Margin::Real(table.row_scores().to_vec()),
            Margin::Real(table.col_scores().to_vec()),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn prob(&self, i: usize, j: usize) -> f64 {
        self.probs[i * self.cols + j]
    }

    /// Row-major probabilities.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn row_values(&self) -> &Margin {
        &self.row_values
    }

    pub fn col_values(&self) -> &Margin {
        &self.col_values
    }

    pub fn is_real(&self) -> bool {
        self.row_values.is_real() && self.col_values.is_real()
    }

    pub fn row_probs(&self) -> Vec<f64> {
        self.probs
            .chunks(self.cols)
            .map(|r| r.iter().sum())
            .collect()
    }

    pub fn col_probs(&self) -> Vec<f64> {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self.prob(i, j)).sum())
            .collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.probs.chunks(self.cols).map(<[f64]>::to_vec).collect()
    }

    pub(crate) fn real_values(&self) -> Result<(&[f64], &[f64])> {
        match (self.row_values.as_real(), self.col_values.as_real()) {
            (Some(r), Some(c)) => Ok((r, c)),
            _ => Err(Error::Unsupported(
                "this functional needs real-valued categories on both margins".into(),
            )),
        }
    }
}
