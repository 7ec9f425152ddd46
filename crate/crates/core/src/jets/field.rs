//! Jet-valued fields and the field-level Poisson bracket.

use super::poly::{mono_index, monomials, n_monomials, JetPoly};
use crate::error::{Error, Result};
use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};

const ZERO: C = C { re: 0.0, im: 0.0 };

/// A set of sample points carrying the coordinate derivatives `∂ = ∂_z` and
/// `∂̄ = ∂_z̄` of sampled functions. Both act on raw chart coefficients; any
/// automorphy bookkeeping is the caller's business.
pub trait Domain {
    fn len(&self) -> usize;
    fn d(&self, f: &[C]) -> Vec<C>;
    fn dbar(&self, f: &[C]) -> Vec<C>;
}

/// Structure-of-arrays jet field: one sampled coefficient function per
/// monomial `p^a p̄^b`, `a + b <= cap`. The constant slot is kept (and is zero
/// for genuine jets) so derivative intermediates share the layout.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JetField {
    cap: usize,
    len: usize,
    slices: Vec<Vec<C>>,
}

impl JetField {
    pub fn zero(cap: usize, len: usize) -> Self {
        JetField { cap, len, slices: vec![vec![ZERO; len]; n_monomials(cap)] }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Coefficient function of `p^a p̄^b` (zero beyond the cap).
    pub fn slice(&self, a: usize, b: usize) -> Vec<C> {
        if a + b > self.cap {
            vec![ZERO; self.len]
        } else {
            self.slices[mono_index(a, b)].clone()
        }
    }

    pub fn slice_ref(&self, a: usize, b: usize) -> &[C] {
        &self.slices[mono_index(a, b)]
    }

    pub fn set_slice(&mut self, a: usize, b: usize, v: Vec<C>) {
        assert!(a + b <= self.cap && v.len() == self.len, "slice outside field layout");
        self.slices[mono_index(a, b)] = v;
    }

    pub fn add_to_slice(&mut self, a: usize, b: usize, v: &[C]) {
        if a + b > self.cap {
            return;
        }
        for (x, y) in self.slices[mono_index(a, b)].iter_mut().zip(v) {
            *x += y;
        }
    }

    /// Jet at one sample point.
    pub fn at(&self, i: usize) -> JetPoly {
        let terms: Vec<_> = monomials(1, self.cap).map(|(a, b)| (a, b, self.slices[mono_index(a, b)][i])).collect();
        JetPoly::from_terms(self.cap, &terms)
    }

    /// Field with the same jet at every sample.
    pub fn constant(p: &JetPoly, len: usize) -> Self {
        let mut f = Self::zero(p.cap(), len);
        for (a, b) in monomials(1, p.cap()) {
            f.slices[mono_index(a, b)] = vec![p.coeff(a, b); len];
        }
        f
    }

    pub fn add(&self, o: &JetField) -> Result<JetField> {
        self.check(o)?;
        let slices = self.slices.iter().zip(&o.slices).map(|(x, y)| x.iter().zip(y).map(|(a, b)| a + b).collect()).collect();
        Ok(JetField { cap: self.cap, len: self.len, slices })
    }

    pub fn sub(&self, o: &JetField) -> Result<JetField> {
        self.add(&o.scale(C::new(-1.0, 0.0)))
    }

    pub fn scale(&self, s: C) -> JetField {
        let slices = self.slices.iter().map(|x| x.iter().map(|a| a * s).collect()).collect();
        JetField { cap: self.cap, len: self.len, slices }
    }

    /// Truncated product.
    pub fn mul(&self, o: &JetField) -> Result<JetField> {
        self.check(o)?;
        Ok(JetField { cap: self.cap, len: self.len, slices: mul_slices(&self.slices, &o.slices, self.cap, self.len) })
    }

    /// Conjugation of the complexified jet: conjugate and swap `(a, b)`.
    pub fn conj(&self) -> JetField {
        let mut out = Self::zero(self.cap, self.len);
        for (a, b) in monomials(0, self.cap) {
            out.slices[mono_index(b, a)] = self.slices[mono_index(a, b)].iter().map(|c| c.conj()).collect();
        }
        out
    }

    /// Real part `(f + conj f) / 2`.
    pub fn real_part(&self) -> JetField {
        self.add(&self.conj()).expect("same layout").scale(C::new(0.5, 0.0))
    }

    /// Homogeneous part of total degree `k`.
    pub fn homogeneous(&self, k: usize) -> JetField {
        let mut out = Self::zero(self.cap, self.len);
        if k <= self.cap {
            for b in 0..=k {
                out.slices[mono_index(k - b, b)] = self.slices[mono_index(k - b, b)].clone();
            }
        }
        out
    }

    /// Part of total degree `< k`.
    pub fn below(&self, k: usize) -> JetField {
        let mut out = Self::zero(self.cap, self.len);
        for (a, b) in monomials(0, k.min(self.cap + 1).saturating_sub(1)) {
            out.slices[mono_index(a, b)] = self.slices[mono_index(a, b)].clone();
        }
        out
    }

    /// Same jet with a different cap (dropping or zero-padding).
    pub fn recap(&self, cap: usize) -> JetField {
        let mut out = Self::zero(cap, self.len);
        for (a, b) in monomials(0, cap.min(self.cap)) {
            out.slices[mono_index(a, b)] = self.slices[mono_index(a, b)].clone();
        }
        out
    }

    /// Largest coefficient modulus over all samples.
    pub fn max_abs(&self) -> f64 {
        self.slices.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest modulus among coefficients of total degree below `k`.
    pub fn max_abs_below(&self, k: usize) -> f64 {
        self.below(k).max_abs()
    }

    /// Lowest degree with a nonzero coefficient anywhere (`cap + 1` if zero).
    pub fn order(&self) -> usize {
        monomials(0, self.cap)
            .find(|&(a, b)| self.slices[mono_index(a, b)].iter().any(|c| *c != ZERO))
            .map(|(a, b)| a + b)
            .unwrap_or(self.cap + 1)
    }

    /// True when the field equals its conjugate to within `tol`.
    pub fn is_real(&self, tol: f64) -> bool {
        self.sub(&self.conj()).map(|d| d.max_abs() <= tol).unwrap_or(false)
    }

    fn check(&self, o: &JetField) -> Result<()> {
        if self.cap != o.cap {
            return Err(Error::Mismatch(format!("degree caps {} and {}", self.cap, o.cap)));
        }
        if self.len != o.len {
            return Err(Error::Mismatch(format!("bases with {} and {} samples", self.len, o.len)));
        }
        Ok(())
    }

    /// Coordinate derivative applied slice by slice.
    fn map_slices(&self, f: impl Fn(&[C]) -> Vec<C>) -> JetField {
        JetField { cap: self.cap, len: self.len, slices: self.slices.iter().map(|s| f(s)).collect() }
    }

    /// `∂/∂p` (`conj_var = false`) or `∂/∂p̄`; lowers degree by one.
    fn fiber_derivative(&self, conj_var: bool) -> JetField {
        let mut out = Self::zero(self.cap, self.len);
        for (a, b) in monomials(1, self.cap) {
            let (n, ta, tb) = if conj_var { (b, a, b.wrapping_sub(1)) } else { (a, a.wrapping_sub(1), b) };
            if n == 0 {
                continue;
            }
            let s = n as f64;
            out.slices[mono_index(ta, tb)] = self.slices[mono_index(a, b)].iter().map(|c| c * s).collect();
        }
        out
    }
}

fn mul_slices(x: &[Vec<C>], y: &[Vec<C>], cap: usize, len: usize) -> Vec<Vec<C>> {
    let mut out = vec![vec![ZERO; len]; n_monomials(cap)];
    for (a1, b1) in monomials(0, cap) {
        let sx = &x[mono_index(a1, b1)];
        if sx.iter().all(|c| *c == ZERO) {
            continue;
        }
        for (a2, b2) in monomials(0, cap - a1 - b1) {
            let sy = &y[mono_index(a2, b2)];
            let o = &mut out[mono_index(a1 + a2, b1 + b2)];
            for i in 0..len {
                o[i] += sx[i] * sy[i];
            }
        }
    }
    out
}

/// Field-level Poisson bracket
/// `{A, B} = A_z B_p + A_z̄ B_p̄ - A_p B_z - A_p̄ B_z̄`, truncated at the cap.
pub fn poisson<D: Domain + ?Sized>(dom: &D, f: &JetField, g: &JetField) -> Result<JetField> {
    f.check(g)?;
    if dom.len() != f.len {
        return Err(Error::Mismatch(format!("field on {} samples, base has {}", f.len, dom.len())));
    }
    let fz = f.map_slices(|s| dom.d(s));
    let fzb = f.map_slices(|s| dom.dbar(s));
    let gz = g.map_slices(|s| dom.d(s));
    let gzb = g.map_slices(|s| dom.dbar(s));
    let fp = f.fiber_derivative(false);
    let fpb = f.fiber_derivative(true);
    let gp = g.fiber_derivative(false);
    let gpb = g.fiber_derivative(true);
    let t1 = fz.mul(&gp)?;
    let t2 = fzb.mul(&gpb)?;
    let t3 = fp.mul(&gz)?;
    let t4 = fpb.mul(&gzb)?;
    t1.add(&t2)?.sub(&t3)?.sub(&t4)
}
