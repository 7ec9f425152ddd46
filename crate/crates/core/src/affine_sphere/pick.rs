//! Pick differentials from harmonic cubic Beltrami differentials.

use crate::error::{Error, Result};
use crate::harmonicize::harmonicity_residual;
use crate::jets::HigherStructure;
use crate::surface::{holomorphic_basis, lambda, Surface};
use crate::tensor::TensorField;
use ndarray::{Array1, Array2};
use ndarray_linalg::Solve;
use num_complex::Complex64 as C;
use serde::Serialize;

/// Largest harmonicity residual accepted for `μ₃`.
pub const PICK_HARMONIC_TOL: f64 = 1e-6;

/// A holomorphic cubic differential `φ = Φ dz³` on the surface.
#[derive(Clone, Debug, Serialize)]
pub struct PickData {
    /// `Φ` at the copies, type `(3, 0)`.
    pub phi: TensorField,
    /// Coordinates in the surface's holomorphic cubic basis.
    pub coefficients: Vec<[f64; 2]>,
    /// Relative part of `conj(μ₃) g² / 12` off the holomorphic space.
    pub fit_residual: f64,
}

impl PickData {
    /// The zero differential.
    pub fn zero(s: &Surface) -> Result<Self> {
        Self::from_coefficients(s, &vec![C::new(0.0, 0.0); holomorphic_basis(s, 3)?.dim()])
    }

    /// `φ = Σ c_j q_j` in the holomorphic cubic basis.
    pub fn from_coefficients(s: &Surface, c: &[C]) -> Result<Self> {
        let basis = holomorphic_basis(s, 3)?;
        if c.len() != basis.dim() {
            return Err(Error::Mismatch(format!("{} coefficients for a {}-dimensional space", c.len(), basis.dim())));
        }
        let mut phi = vec![C::new(0.0, 0.0); s.n_copies()];
        for (cj, q) in c.iter().zip(&basis.q) {
            for (p, v) in phi.iter_mut().zip(&q.values) {
                *p += cj * v;
            }
        }
        Ok(PickData {
            phi: TensorField::new((3, 0), phi),
            coefficients: c.iter().map(|x| [x.re, x.im]).collect(),
            fit_residual: 0.0,
        })
    }

    /// `e^{iθ} φ`.
    pub fn rotate_phase(&self, theta: f64) -> Self {
        let e = C::from_polar(1.0, theta);
        PickData {
            phi: self.phi.scale(e),
            coefficients: self.coefficients.iter().map(|c| { let z = C::new(c[0], c[1]) * e; [z.re, z.im] }).collect(),
            fit_residual: self.fit_residual,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.phi.max_abs() == 0.0
    }
}

/// `φ = conj(μ₃) g² / 12` for a structure with harmonic `μ₃`, fitted onto
/// the holomorphic cubic differentials.
pub fn pick_differential(s: &Surface, st: &HigherStructure) -> Result<PickData> {
    if st.degree < 3 {
        return Err(Error::Invalid("a Pick differential needs mu_3".into()));
    }
    if st.len() != s.n_copies() {
        return Err(Error::Mismatch("structure not sampled on this surface".into()));
    }
    let mu = st.mu(3);
    let res = harmonicity_residual(s, mu, 3)?;
    if res > PICK_HARMONIC_TOL {
        return Err(Error::Residual { what: "harmonicity of mu_3".into(), value: res, tol: PICK_HARMONIC_TOL });
    }
    let raw: Vec<C> = mu.values.iter().zip(s.copy_positions()).map(|(m, z)| m.conj() * lambda(z).powi(2) / 12.0).collect();
    let basis = holomorphic_basis(s, 3)?;
    let w = s.t_weights((3, 0));
    let d = basis.dim();
    // weighted normal equations of the small fit
    let mut g = Array2::<C>::zeros((d, d));
    let mut b = Array1::<C>::zeros(d);
    for i in 0..d {
        for j in 0..d {
            g[[i, j]] = basis.q[j].values.iter().zip(&basis.q[i].values).zip(&w).map(|((a, c), w)| a * c.conj() * w).sum();
        }
        b[i] = raw.iter().zip(&basis.q[i].values).zip(&w).map(|((a, c), w)| a * c.conj() * w).sum();
    }
    let c = g.solve(&b)?;
    let mut out = PickData::from_coefficients(s, &c.to_vec())?;
    let norm = |v: &mut dyn Iterator<Item = C>| v.zip(&w).map(|(x, w)| x.norm_sqr() * w).sum::<f64>().sqrt();
    let nr = norm(&mut raw.iter().copied());
    if nr > 0.0 {
        out.fit_residual = norm(&mut raw.iter().zip(&out.phi.values).map(|(a, b)| a - b)) / nr;
    }
    Ok(out)
}
