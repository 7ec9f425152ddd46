use super::field::JetField;
use crate::error::{Error, Result};
use crate::tensor::TensorField;
use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};

/// Sign of the `p̄` term in the normalized generator: `-p̄ + μ₂p + …`
/// (positive) or `p̄ + μ₂p + …` (negative).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    Positive,
    Negative,
}

impl Normalization {
    /// Coefficient of `p̄` in the normalized generator.
    pub fn pbar_sign(self) -> f64 {
        match self {
            Normalization::Positive => -1.0,
            Normalization::Negative => 1.0,
        }
    }
}

/// An n-complex structure in centered coordinates: the ideal generated by
/// `∓p̄ + μ₂p + … + μ_n p^{n-1}`. `mu[0]` is μ₂.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HigherStructure {
    pub degree: usize,
    pub normalization: Normalization,
    pub mu: Vec<TensorField>,
}

impl HigherStructure {
    pub fn new(normalization: Normalization, mu: Vec<TensorField>) -> Result<Self> {
        if mu.is_empty() {
            return Err(Error::Invalid("a higher structure needs at least mu_2".into()));
        }
        let len = mu[0].len();
        for (i, m) in mu.iter().enumerate() {
            let k = i as i32 + 2;
            m.check_type((1 - k, 1))?;
            if m.len() != len {
                return Err(Error::Mismatch("coefficients sampled on different bases".into()));
            }
        }
        let s = HigherStructure { degree: mu.len() + 1, normalization, mu };
        s.check_beltrami()?;
        Ok(s)
    }

    /// Degree-`n` structure with all coefficients zero.
    pub fn zero(n: usize, normalization: Normalization, len: usize) -> Self {
        assert!(n >= 2);
        let mu = (2..=n as i32).map(|k| TensorField::zeros((1 - k, 1), len)).collect();
        HigherStructure { degree: n, normalization, mu }
    }

    /// Natural-coordinate structure: μ₂ = 0 and the given higher coefficients.
    pub fn natural(normalization: Normalization, higher: Vec<TensorField>) -> Result<Self> {
        let len = higher.first().map(|m| m.len()).ok_or_else(|| Error::Invalid("no coefficients".into()))?;
        let mut mu = vec![TensorField::zeros((-1, 1), len)];
        mu.extend(higher);
        Self::new(normalization, mu)
    }

    pub fn len(&self) -> usize {
        self.mu[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// μ_k for `2 <= k <= n`.
    pub fn mu(&self, k: usize) -> &TensorField {
        &self.mu[k - 2]
    }

    pub fn mu_mut(&mut self, k: usize) -> &mut TensorField {
        &mut self.mu[k - 2]
    }

    pub fn sup_mu2(&self) -> f64 {
        self.mu[0].max_abs()
    }

    pub fn check_beltrami(&self) -> Result<()> {
        let s = self.sup_mu2();
        if !(s < 1.0) {
            return Err(Error::Beltrami(s));
        }
        Ok(())
    }

    /// Same ideal written in the other normalization (all μ_k negate).
    pub fn convert(&self, to: Normalization) -> HigherStructure {
        if to == self.normalization {
            return self.clone();
        }
        HigherStructure {
            degree: self.degree,
            normalization: to,
            mu: self.mu.iter().map(|m| m.scale(C::new(-1.0, 0.0))).collect(),
        }
    }

    /// Normalized generator as a jet field of the given cap (≥ n-1).
    pub fn generator(&self, cap: usize) -> JetField {
        let len = self.len();
        let mut g = JetField::zero(cap, len);
        g.set_slice(0, 1, vec![C::new(self.normalization.pbar_sign(), 0.0); len]);
        for k in 2..=self.degree.min(cap + 1) {
            g.set_slice(k - 1, 0, self.mu(k).values.clone());
        }
        g
    }

    /// Largest coefficient difference to another structure.
    pub fn distance(&self, o: &HigherStructure) -> f64 {
        self.mu
            .iter()
            .zip(&o.mu)
            .map(|(a, b)| a.values.iter().zip(&b.values).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max))
            .fold(0.0, f64::max)
    }
}

/// Drop μ_{k+1}, …, μ_n.
pub fn project_structure(s: &HigherStructure, k: usize) -> Result<HigherStructure> {
    if k < 2 || k > s.degree {
        return Err(Error::Invalid(format!("projection degree {} outside 2..={}", k, s.degree)));
    }
    Ok(HigherStructure { degree: k, normalization: s.normalization, mu: s.mu[..k - 1].to_vec() })
}
