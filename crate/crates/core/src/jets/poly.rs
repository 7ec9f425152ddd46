//! Truncated polynomials in the fiber variables `p`, `p̄`.
//!
//! Monomials `p^a p̄^b` with `a + b <= D` are stored densely, grouped by
//! total degree and then by the power of `p̄`. The constant slot is kept so
//! that intermediate results (partial derivatives in `p`) fit the same
//! layout; a [`JetPoly`] always has it equal to zero.

use crate::error::{Error, Result};
use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};

/// Number of monomials of total degree at most `cap`, constant included.
pub fn n_monomials(cap: usize) -> usize {
    (cap + 1) * (cap + 2) / 2
}

/// Dense slot of the monomial `p^a p̄^b`.
#[inline]
pub fn mono_index(a: usize, b: usize) -> usize {
    let d = a + b;
    d * (d + 1) / 2 + b
}

/// Inverse of [`mono_index`].
pub fn mono_of(idx: usize) -> (usize, usize) {
    let mut d = 0;
    while (d + 1) * (d + 2) / 2 <= idx {
        d += 1;
    }
    let b = idx - d * (d + 1) / 2;
    (d - b, b)
}

/// All `(a, b)` pairs with `lo <= a + b <= hi`, in storage order.
pub fn monomials(lo: usize, hi: usize) -> impl Iterator<Item = (usize, usize)> {
    (lo..=hi).flat_map(|d| (0..=d).map(move |b| (d - b, b)))
}

/// Jet at a point of a function on the cotangent bundle vanishing on the
/// zero section, truncated at total degree `cap`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JetPoly {
    cap: usize,
    coeffs: Vec<C>,
}

impl JetPoly {
    pub fn zero(cap: usize) -> Self {
        assert!(cap >= 1, "degree cap must be at least 1");
        JetPoly { cap, coeffs: vec![C::new(0.0, 0.0); n_monomials(cap)] }
    }

    /// Single monomial `c p^a p̄^b`; terms above the cap vanish.
    pub fn monomial(cap: usize, a: usize, b: usize, c: C) -> Self {
        let mut j = Self::zero(cap);
        if a + b >= 1 && a + b <= cap {
            j.coeffs[mono_index(a, b)] = c;
        }
        j
    }

    pub fn from_terms(cap: usize, terms: &[(usize, usize, C)]) -> Self {
        let mut j = Self::zero(cap);
        for &(a, b, c) in terms {
            if a + b >= 1 && a + b <= cap {
                j.coeffs[mono_index(a, b)] += c;
            }
        }
        j
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn coeff(&self, a: usize, b: usize) -> C {
        if a + b > self.cap {
            C::new(0.0, 0.0)
        } else {
            self.coeffs[mono_index(a, b)]
        }
    }

    pub fn set(&mut self, a: usize, b: usize, c: C) {
        assert!(a + b >= 1 && a + b <= self.cap, "monomial outside the jet range");
        self.coeffs[mono_index(a, b)] = c;
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn add(&self, other: &JetPoly) -> Result<JetPoly> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(x, y)| x + y).collect();
        Ok(JetPoly { cap: self.cap, coeffs })
    }

    pub fn scale(&self, s: C) -> JetPoly {
        JetPoly { cap: self.cap, coeffs: self.coeffs.iter().map(|x| x * s).collect() }
    }

    /// Truncated product.
    pub fn mul(&self, other: &JetPoly) -> Result<JetPoly> {
        self.check(other)?;
        Ok(JetPoly { cap: self.cap, coeffs: mul_dense(&self.coeffs, &other.coeffs, self.cap) })
    }

    /// Complex conjugation of the extension to the complexified bundle:
    /// conjugate the coefficients and swap the roles of `p` and `p̄`.
    pub fn conj(&self) -> JetPoly {
        let mut out = Self::zero(self.cap);
        for (a, b) in monomials(1, self.cap) {
            out.coeffs[mono_index(b, a)] = self.coeffs[mono_index(a, b)].conj();
        }
        out
    }

    /// Lowest total degree carrying a nonzero coefficient (`cap + 1` for zero).
    pub fn order(&self) -> usize {
        monomials(1, self.cap)
            .find(|&(a, b)| self.coeffs[mono_index(a, b)] != C::new(0.0, 0.0))
            .map(|(a, b)| a + b)
            .unwrap_or(self.cap + 1)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    fn check(&self, other: &JetPoly) -> Result<()> {
        if self.cap != other.cap {
            return Err(Error::Mismatch(format!("degree caps {} and {}", self.cap, other.cap)));
        }
        Ok(())
    }
}

/// Product of two dense coefficient vectors truncated at `cap`.
pub fn mul_dense(x: &[C], y: &[C], cap: usize) -> Vec<C> {
    let mut out = vec![C::new(0.0, 0.0); n_monomials(cap)];
    for (a1, b1) in monomials(0, cap) {
        let cx = x[mono_index(a1, b1)];
        if cx == C::new(0.0, 0.0) {
            continue;
        }
        for (a2, b2) in monomials(0, cap - a1 - b1) {
            out[mono_index(a1 + a2, b1 + b2)] += cx * y[mono_index(a2, b2)];
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_layout() {
        for idx in 0..n_monomials(7) {
            let (a, b) = mono_of(idx);
            assert_eq!(mono_index(a, b), idx);
        }
        assert_eq!(monomials(1, 3).count(), n_monomials(3) - 1);
    }

    #[test]
    fn truncated_product() {
        let p = JetPoly::from_terms(3, &[(1, 0, C::new(1.0, 0.0))]);
        let pb = JetPoly::from_terms(3, &[(0, 1, C::new(0.0, 2.0))]);
        let x = p.mul(&pb).unwrap();
        assert_eq!(x.coeff(1, 1), C::new(0.0, 2.0));
        // p⁴ falls off a cap-3 jet
        let p2 = p.mul(&p).unwrap();
        assert_eq!(p2.mul(&p2).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn conjugation_swaps_variables() {
        let x = JetPoly::from_terms(3, &[(2, 1, C::new(1.0, 3.0))]);
        let c = x.conj();
        assert_eq!(c.coeff(1, 2), C::new(1.0, -3.0));
        assert_eq!(c.conj(), x);
        assert_eq!(x.order(), 3);
    }
}
