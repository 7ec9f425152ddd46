//! Hodge decomposition of k-Beltrami differentials, `μ = μ̃ + ∂̄w`.
//!
//! On the discrete surface the k-Beltrami differentials live in the space
//! `Y_k = range(∂̄) ⊕ H_k` of copy vectors of type `(1-k, 1)`, where `∂̄`
//! acts on continuous sections of type `(1-k, 0)` and `H_k` is spanned by
//! `conj(q) λ^{1-k}` for the holomorphic `k`-differentials `q`, made exactly
//! orthogonal to `range(∂̄)`. Within `Y_k` the splitting is exact and
//! orthogonal for the Petersson pairing; the component of an input outside
//! `Y_k` is reported as the discretization defect.

use crate::error::{Error, Result};
use crate::linalg::{adjoint_dot, adjoint_mul, mat_mul, orthonormalize, ThinQr};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use crate::surface::basis::weighted_dbar;
use crate::surface::ops::{dbar_op, petersson_pairing};
use crate::surface::{holomorphic_basis, lambda, Surface};
use crate::tensor::TensorField;
use ndarray::{Array2, ArrayView1};
use num_complex::Complex64 as C;
use serde::Serialize;
use std::sync::Arc;

/// Default relative reconstruction tolerance.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Orthonormal frame of `Y_k` in the Petersson-weighted coordinates.
#[derive(Debug)]
pub struct YSpace {
    pub k: usize,
    range: ThinQr,
    harmonic: Array2<C>,
    /// Orthonormal frame of the complement of `Y_k`; much thinner than the
    /// frame of `Y_k` itself, so projections go through it.
    complement: Array2<C>,
    complement_h: Array2<C>,
    s_t: Vec<f64>,
    s_n: Vec<f64>,
}

impl YSpace {
    pub fn harmonic_dim(&self) -> usize {
        self.harmonic.ncols()
    }

    /// Codimension of `Y_k` among copy vectors.
    pub fn codim(&self) -> usize {
        self.complement.ncols()
    }

    fn ty(&self) -> (i32, i32) {
        (1 - self.k as i32, 1)
    }

    fn weigh(&self, x: &[C]) -> Vec<C> {
        x.iter().zip(&self.s_t).map(|(v, s)| v * s).collect()
    }

    fn unweigh(&self, y: Vec<C>) -> Vec<C> {
        y.into_iter().zip(&self.s_t).map(|(v, s)| v / s).collect()
    }

    fn project_onto(q: &Array2<C>, y: &[C]) -> Vec<C> {
        mat_mul(q, &adjoint_mul(q, y))
    }

    /// Orthogonal projection onto `Y_k`.
    pub fn project(&self, x: &[C]) -> Vec<C> {
        let y = self.weigh(x);
        let c = self.complement_h.dot(&ArrayView1::from(&y[..]));
        let a = self.complement.dot(&c);
        self.unweigh(y.iter().zip(&a).map(|(u, v)| u - v).collect())
    }

    /// Orthogonal projection onto the harmonic part.
    pub fn project_harmonic(&self, x: &[C]) -> Vec<C> {
        self.unweigh(Self::project_onto(&self.harmonic, &self.weigh(x)))
    }

    /// Least-squares nodal potential `w` with `∂̄w ≈ r`.
    pub fn potential_nodal(&self, r: &[C]) -> Result<Vec<C>> {
        let x = self.range.lstsq(&self.weigh(r))?;
        Ok(x.into_iter().zip(&self.s_n).map(|(v, s)| v / s).collect())
    }

    /// Relative norm of the part of `x` outside `Y_k`.
    pub fn defect(&self, x: &[C]) -> f64 {
        let y = self.weigh(x);
        let py = self.weigh(&self.project(x));
        let n = norm(&y);
        if n == 0.0 {
            return 0.0;
        }
        norm(&y.iter().zip(&py).map(|(a, b)| a - b).collect::<Vec<_>>()) / n
    }
}

fn norm(x: &[C]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// Builds (and caches on the surface) the space `Y_k`.
pub fn y_space(s: &Surface, k: usize) -> Result<Arc<YSpace>> {
    if k < 2 {
        return Err(Error::Invalid(format!("k-Beltrami differentials need k >= 2, got {}", k)));
    }
    s.cache.get_or(("yspace", k as i64), || {
        let a = 1 - k as i32;
        let w = weighted_dbar(s, a);
        let range = ThinQr::new(&w.m)?;
        let basis = holomorphic_basis(s, k)?;
        let t = s.n_copies();
        let mut h = Array2::<C>::zeros((t, basis.dim()));
        for (j, q) in basis.q.iter().enumerate() {
            for (i, z) in s.copy_positions().into_iter().enumerate() {
                h[[i, j]] = q.values[i].conj() * lambda(z).powi(a) * w.s_t[i];
            }
        }
        // two passes of block Gram–Schmidt against range(∂̄)
        for _ in 0..2 {
            for j in 0..h.ncols() {
                let col = h.column(j).to_vec();
                let p = YSpace::project_onto(&range.q, &col);
                for (i, v) in p.into_iter().enumerate() {
                    h[[i, j]] -= v;
                }
            }
        }
        let harmonic = orthonormalize(&h)?;
        let complement = complement(&range.q, &harmonic, k)?;
        let complement_h = complement.t().mapv(|x| x.conj());
        Ok(YSpace { k, range, harmonic, complement, complement_h, s_t: w.s_t, s_n: w.s_n })
    })
}

/// Orthonormal frame of the orthogonal complement of `span(q) ⊕ span(h)`
/// (both orthonormal and mutually orthogonal), from projected random vectors.
fn complement(q: &Array2<C>, h: &Array2<C>, seed: usize) -> Result<Array2<C>> {
    let t = q.nrows();
    let c = t - q.ncols() - h.ncols();
    let mut rng = ChaCha8Rng::seed_from_u64(seed as u64);
    let mut z = Array2::from_shape_fn((t, c), |_| C::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5));
    for _ in 0..2 {
        z = &z - &q.dot(&adjoint_dot(q, &z));
        z = &z - &h.dot(&adjoint_dot(h, &z));
        z = orthonormalize(&z)?;
    }
    Ok(z)
}

/// Petersson-orthogonal projection onto harmonic k-Beltrami differentials.
pub fn harmonic_projection(s: &Surface, mu: &TensorField, k: usize) -> Result<TensorField> {
    let y = y_space(s, k)?;
    mu.check_type(y.ty())?;
    Ok(TensorField::new(y.ty(), y.project_harmonic(&mu.values)))
}

/// Projection onto the discrete space `Y_k` of k-Beltrami differentials.
pub fn project_beltrami(s: &Surface, mu: &TensorField, k: usize) -> Result<TensorField> {
    let y = y_space(s, k)?;
    mu.check_type(y.ty())?;
    Ok(TensorField::new(y.ty(), y.project(&mu.values)))
}

/// Solves `∂̄w = r` for `w` of type `(1-k, 0)`. Any harmonic component of
/// `r` is removed first; the remaining mismatch must be below `tol`.
pub fn solve_dbar_potential(s: &Surface, r: &TensorField, k: usize, tol: f64) -> Result<TensorField> {
    solve_potential(s, r, k, tol, None)
}

/// With `reference`, the residual is measured against that norm instead of
/// the norm of the exact part, so a right-hand side at rounding level (a
/// harmonic input) does not fail.
fn solve_potential(s: &Surface, r: &TensorField, k: usize, tol: f64, reference: Option<f64>) -> Result<TensorField> {
    let y = y_space(s, k)?;
    r.check_type(y.ty())?;
    let h = y.project_harmonic(&r.values);
    let rr: Vec<C> = r.values.iter().zip(&h).map(|(a, b)| a - b).collect();
    let nodal = y.potential_nodal(&rr)?;
    let w = TensorField::new((1 - k as i32, 0), s.iota(&nodal, (1 - k as i32, 0)));
    let dw = dbar_op(s, &w)?;
    let scale = reference.unwrap_or_else(|| norm(&y.weigh(&rr)));
    if scale > 0.0 {
        let res = norm(&y.weigh(&dw.values.iter().zip(&rr).map(|(a, b)| a - b).collect::<Vec<_>>())) / scale;
        if res > tol {
            return Err(Error::Residual { what: "dbar potential".into(), value: res, tol });
        }
    }
    Ok(w)
}

/// Result of [`hodge_decompose`].
#[derive(Clone, Debug, Serialize)]
pub struct HodgeSplit {
    pub k: usize,
    pub harmonic: TensorField,
    pub potential: TensorField,
    /// `‖μ - (μ̃ + ∂̄w)‖ / ‖μ‖` for the input as given.
    pub residual: f64,
    /// `⟨μ̃, ∂̄w⟩ / ‖μ‖²`.
    pub orthogonality: f64,
    /// Relative part of the input outside the discrete space `Y_k`.
    pub defect: f64,
}

/// `μ = μ̃ + ∂̄w` with `μ̃` harmonic. The input is first projected to `Y_k`;
/// fails if the reconstruction misses the input by more than `tol`.
pub fn hodge_decompose(s: &Surface, mu: &TensorField, k: usize, tol: f64) -> Result<HodgeSplit> {
    let y = y_space(s, k)?;
    mu.check_type(y.ty())?;
    let defect = y.defect(&mu.values);
    let harmonic = TensorField::new(y.ty(), y.project_harmonic(&mu.values));
    let rest = TensorField::new(y.ty(), y.project(&mu.values)).sub(&harmonic)?;
    let potential = solve_potential(s, &rest, k, tol, Some(norm(&y.weigh(&mu.values))))?;
    let dw = dbar_op(s, &potential)?;
    let nmu = petersson_pairing(s, mu, mu, k)?.re;
    let (residual, orthogonality) = if nmu > 0.0 {
        let e = mu.sub(&harmonic)?.sub(&dw)?;
        (
            (petersson_pairing(s, &e, &e, k)?.re / nmu).sqrt(),
            petersson_pairing(s, &harmonic, &dw, k)?.norm() / nmu,
        )
    } else {
        (0.0, 0.0)
    };
    if residual > tol {
        return Err(Error::Residual { what: "hodge reconstruction".into(), value: residual, tol });
    }
    Ok(HodgeSplit { k, harmonic, potential, residual, orthogonality, defect })
}

/// `∫ q₁ conj(q₂) λ^{1-k}` for holomorphic `q₁, q₂` of type `(k, 0)`;
/// differentials of different degrees pair to zero.
pub fn pressure_restriction_pairing(s: &Surface, q1: &TensorField, q2: &TensorField) -> Result<C> {
    if q1.ty.1 != 0 || q2.ty.1 != 0 {
        return Err(Error::Invalid("pressure pairing needs holomorphic-type inputs".into()));
    }
    if q1.ty.0 != q2.ty.0 {
        return Ok(C::new(0.0, 0.0));
    }
    let w = s.t_weights(q1.ty);
    Ok(q1.values.iter().zip(&q2.values).zip(&w).map(|((a, b), w)| a * b.conj() * w).sum())
}

