use crate::error::{ensure_finite, Error, Result};

/// Finite law on the real line, stored with sorted distinct atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteLaw {
    atoms: Vec<f64>,
    probs: Vec<f64>,
}

impl DiscreteLaw {
    /// Atoms may come in any order; repeated atoms have their mass merged.
    pub fn new(atoms: &[f64], probs: &[f64]) -> Result<Self> {
        if atoms.is_empty() || atoms.len() != probs.len() {
            return Err(Error::invalid(
                "discrete law needs matching, nonempty atoms and probabilities",
            ));
        }
        ensure_finite(atoms, "law atoms")?;
        ensure_finite(probs, "law probabilities")?;
        if probs.iter().any(|&p| p < 0.0) {
            return Err(Error::invalid("law probabilities must be nonnegative"));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > super::PROBABILITY_SUM_TOLERANCE {
            return Err(Error::invalid(format!(
                "law probabilities sum to {total}, not 1"
            )));
        }
        let mut pairs: Vec<(f64, f64)> = atoms.iter().copied().zip(probs.iter().copied()).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(pairs.len());
        for (z, p) in pairs {
            match merged.last_mut() {
                Some(last) if last.0 == z => last.1 += p,
                _ => merged.push((z, p)),
            }
        }
        let (atoms, probs) = merged.into_iter().unzip();
        Ok(Self { atoms, probs })
    }

    pub fn point_mass(z: f64) -> Result<Self> {
        Self::new(&[z], &[1.0])
    }

    pub fn atoms(&self) -> &[f64] {
        &self.atoms
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// `P(Z = z)`.
    pub fn mass(&self, z: f64) -> f64 {
        match self.atoms.binary_search_by(|a| a.total_cmp(&z)) {
            Ok(i) => self.probs[i],
            Err(_) => 0.0,
        }
    }

    /// `P(Z <= z)` or `P(Z < z)`.
    pub fn cdf(&self, z: f64, convention: CdfConvention) -> f64 {
        let k = match convention {
            CdfConvention::Right => self.atoms.partition_point(|&a| a <= z),
            CdfConvention::Left => self.atoms.partition_point(|&a| a < z),
        };
        self.probs[..k].iter().sum()
    }
}

/// Which side of a jump the distribution function takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CdfConvention {
    /// `P(Z < z)`
    Left,
    /// `P(Z <= z)`
    Right,
}

/// `C_alpha = sum_z (G(z) - H(z))^2 f_alpha(z)` over the atoms of
/// `F_alpha = alpha G + (1 - alpha) H`, with `f_alpha` its mass function.
pub fn pop_cvm_c_alpha(
    g: &DiscreteLaw,
    h: &DiscreteLaw,
    alpha: f64,
    convention: CdfConvention,
) -> Result<f64> {
    if !alpha.is_finite() {
        return Err(Error::invalid("alpha must be finite"));
    }
    let mut support: Vec<f64> = g.atoms().iter().chain(h.atoms()).copied().collect();
    support.sort_by(f64::total_cmp);
    support.dedup();
    Ok(support
        .into_iter()
        .map(|z| {
            let d = g.cdf(z, convention) - h.cdf(z, convention);
            d * d * (alpha * g.mass(z) + (1.0 - alpha) * h.mass(z))
        })
        .sum())
}
