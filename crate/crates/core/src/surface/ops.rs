//! Differential operators, quadrature and pairings on the surface.

use super::mesh::{dlog_lambda, lambda, Surface};
use crate::error::{Error, Result};
use crate::tensor::TensorField;
use ndarray::Array2;
use num_complex::Complex64 as C;

fn check_len(s: &Surface, t: &TensorField) -> Result<()> {
    if t.len() != s.n_copies() {
        return Err(Error::Mismatch(format!("field has {} samples, surface has {}", t.len(), s.n_copies())));
    }
    Ok(())
}

/// Plain `∂̄` on a section of type `(a, 0)`, giving type `(a, 1)`.
pub fn dbar_op(s: &Surface, t: &TensorField) -> Result<TensorField> {
    check_len(s, t)?;
    if t.ty.1 != 0 {
        return Err(Error::Invalid(format!("dbar_op needs type (a,0), got {:?}", t.ty)));
    }
    Ok(TensorField::new((t.ty.0, 1), s.wirtinger(&t.values).1))
}

/// Metric-corrected `∂` on type `(a, b)`: `∂t - a (∂ log λ) t`, of type
/// `(a+1, b)`. In the upper half plane `∂ log λ = -2/(z - z̄)`.
pub fn maass_d_op(s: &Surface, t: &TensorField) -> Result<TensorField> {
    check_len(s, t)?;
    let d = s.wirtinger(&t.values).0;
    let a = t.ty.0 as f64;
    let z = s.copy_positions();
    let v = d.iter().zip(&t.values).zip(&z).map(|((d, x), &z)| d - dlog_lambda(z) * x * a).collect();
    Ok(TensorField::new((t.ty.0 + 1, t.ty.1), v))
}

/// `∫ d` for a `(1,1)` density `d(z) dz dz̄`, normalized so that `λ`
/// integrates to the hyperbolic area.
pub fn integrate_density(s: &Surface, d: &TensorField) -> Result<C> {
    check_len(s, d)?;
    if d.ty != (1, 1) {
        return Err(Error::Invalid(format!("integrand of type {:?} is not a density", d.ty)));
    }
    let w = s.copy_weights();
    Ok(d.values.iter().zip(&w).map(|(x, w)| x * w).sum())
}

/// `⟨μ, ν⟩ = ∫ μ ν̄ g^{k-1}` on `k`-Beltrami differentials.
pub fn petersson_pairing(s: &Surface, mu: &TensorField, nu: &TensorField, k: usize) -> Result<C> {
    let ty = (1 - k as i32, 1);
    mu.check_type(ty)?;
    nu.check_type(ty)?;
    check_len(s, mu)?;
    check_len(s, nu)?;
    let w = s.t_weights(ty);
    Ok(mu.values.iter().zip(&nu.values).zip(&w).map(|((a, b), w)| a * b.conj() * w).sum())
}

/// Weighted `L²` inner product of two sections of the same type, using the
/// natural pointwise norm `|t|² λ^{-a-b}` and the hyperbolic area.
pub fn l2_inner(s: &Surface, x: &[C], y: &[C], ty: (i32, i32)) -> C {
    let w = s.t_weights(ty);
    x.iter().zip(y).zip(&w).map(|((a, b), w)| a * b.conj() * w).sum()
}

pub fn l2_norm(s: &Surface, x: &[C], ty: (i32, i32)) -> f64 {
    l2_inner(s, x, x, ty).re.max(0.0).sqrt()
}

/// Dense matrix of `∂̄` from nodal values of type `(a, 0)` to copy values of
/// type `(a, 1)`.
pub fn dbar_matrix(s: &Surface, a: i32) -> Array2<C> {
    let n1 = s.order() + 1;
    let m = s.per_element();
    let fac = s.automorphy_factors((a, 0));
    let d = &s.gll.d;
    let mut b = Array2::<C>::zeros((s.n_copies(), s.n_nodes()));
    for (e, el) in s.elements.iter().enumerate() {
        for i in 0..n1 {
            for l in 0..n1 {
                let t = i * n1 + l;
                let row = e * m + t;
                let (zx, ze, dl) = (el.zxi[t], el.zeta[t], el.delta[t]);
                // ∂̄f = (zξ f_η - zη f_ξ)/Δ
                for k in 0..n1 {
                    let c = i * n1 + k;
                    b[[row, el.node[c]]] += zx / dl * d[l * n1 + k] * fac[e * m + c];
                    let c = k * n1 + l;
                    b[[row, el.node[c]]] -= ze / dl * d[i * n1 + k] * fac[e * m + c];
                }
            }
        }
    }
    b
}

/// Values of `λ^e` at the copies, as a `(e, e)` section.
pub fn lambda_power(s: &Surface, e: i32) -> TensorField {
    TensorField::new((e, e), s.copy_positions().into_iter().map(|z| C::new(lambda(z).powi(e), 0.0)).collect())
}

/// Pointwise product of sections, with types adding.
pub fn product(x: &TensorField, y: &TensorField) -> TensorField {
    TensorField::new(
        (x.ty.0 + y.ty.0, x.ty.1 + y.ty.1),
        x.values.iter().zip(&y.values).map(|(a, b)| a * b).collect(),
    )
}

/// Pointwise conjugate; swaps the type.
pub fn conj_field(x: &TensorField) -> TensorField {
    TensorField::new((x.ty.1, x.ty.0), x.values.iter().map(|v| v.conj()).collect())
}
