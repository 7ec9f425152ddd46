//! First variation of an n-complex structure along a Hamiltonian.
//!
//! With the generator `f = σp̄ + Σ μ_j p^{j-1}` the flow is `ḟ ≡ {H, f}`
//! modulo the ideal. For a normalized `H = Σ w_k p^k` this gives
//!
//! `μ̇_l = σ δ_{l,k+1} ∂̄w_k + (l-k) μ_{l-k+1} ∂w_k - k w_k ∂μ_{l-k+1}`
//!
//! summed over `k`, with `μ_{l-k+1}` read as zero below index 2.

use super::FlowSpace;
use crate::error::{Error, Result};
use crate::jets::reduce::normal_form;
use crate::jets::{ideal_reduce, poisson, HigherStructure, JetField, Normalization};
use crate::surface::ops::maass_d_op;
use crate::surface::Surface;
use crate::tensor::TensorField;
use num_complex::Complex64 as C;

fn check(dom_len: usize, s: &HigherStructure, h: &JetField) -> Result<()> {
    if s.len() != dom_len || h.len() != dom_len {
        return Err(Error::Mismatch("structure, Hamiltonian and base differ in size".into()));
    }
    Ok(())
}

fn zeros(s: &HigherStructure) -> Vec<TensorField> {
    (2..=s.degree).map(|l| TensorField::zeros((1 - l as i32, 1), s.len())).collect()
}

fn axpy(out: &mut [C], a: C, x: &[C], y: &[C]) {
    for ((o, x), y) in out.iter_mut().zip(x).zip(y) {
        *o += a * x * y;
    }
}

/// Tangent `(μ̇₂, …, μ̇_n)` from the normalized form of `H` and the
/// closed-form coefficient law.
pub fn first_variation<D: FlowSpace + ?Sized>(dom: &D, s: &HigherStructure, h: &JetField) -> Result<Vec<TensorField>> {
    check(dom.len(), s, h)?;
    let n = s.degree;
    let sigma = s.normalization.pbar_sign();
    let w = ideal_reduce(h, s)?;
    let mut out = zeros(s);
    let dmu: Vec<Vec<C>> = (2..=n).map(|j| dom.d(&s.mu(j).values)).collect();
    for k in 1..n {
        let wk = &w[k - 1].values;
        if wk.iter().all(|v| v.norm() == 0.0) {
            continue;
        }
        let dw = dom.d(wk);
        let dbw = dom.dbar(wk);
        for l in k + 1..=n {
            let o = &mut out[l - 2].values;
            if l == k + 1 {
                for (o, v) in o.iter_mut().zip(&dbw) {
                    *o += v * sigma;
                }
            }
            let j = l - k + 1;
            axpy(o, C::new((l - k) as f64, 0.0), &s.mu(j).values, &dw);
            axpy(o, C::new(-(k as f64), 0.0), wk, &dmu[j - 2]);
        }
    }
    Ok(out)
}

/// Same tangent computed directly: reduce `{H, f}` modulo the structure and
/// read off the coefficients of `p^{l-1}`. Independent of the closed form.
pub fn first_variation_bracket<D: FlowSpace + ?Sized>(dom: &D, s: &HigherStructure, h: &JetField) -> Result<Vec<TensorField>> {
    check(dom.len(), s, h)?;
    let cap = s.degree - 1;
    let f = s.generator(cap);
    let b = poisson(dom, &h.recap(cap), &f)?;
    let nf = normal_form(&b, s)?;
    Ok((2..=s.degree).map(|l| TensorField::new((1 - l as i32, 1), nf[l - 1].clone())).collect())
}

/// Tangent in terms of the metric-corrected derivative on the surface, for
/// structures in natural coordinates (`μ₂ = 0`) and negative normalization:
///
/// `μ̇_{k+1} = ∂̄w_k`, `μ̇_l = (l-k) μ_{l-k+1} D(w_k) - k w_k D(μ_{l-k+1})`.
pub fn first_variation_maass(s: &Surface, st: &HigherStructure, h: &JetField) -> Result<Vec<TensorField>> {
    check(s.n_copies(), st, h)?;
    if st.normalization != Normalization::Negative {
        return Err(Error::Invalid("the Maass form is stated for negative normalization".into()));
    }
    if st.sup_mu2() > 0.0 {
        return Err(Error::Invalid("the Maass form is implemented for mu_2 = 0 only".into()));
    }
    let n = st.degree;
    let w = ideal_reduce(h, st)?;
    let mut out = zeros(st);
    let dmu: Vec<TensorField> = (2..=n).map(|j| maass_d_op(s, st.mu(j))).collect::<Result<_>>()?;
    for k in 1..n {
        let wk = &w[k - 1];
        if wk.max_abs() == 0.0 {
            continue;
        }
        let dw = maass_d_op(s, wk)?;
        let dbw = s.wirtinger(&wk.values).1;
        for l in k + 1..=n {
            let o = &mut out[l - 2].values;
            if l == k + 1 {
                for (o, v) in o.iter_mut().zip(&dbw) {
                    *o += v;
                }
                continue;
            }
            let j = l - k + 1;
            axpy(o, C::new((l - k) as f64, 0.0), &st.mu(j).values, &dw.values);
            axpy(o, C::new(-(k as f64), 0.0), &wk.values, &dmu[j - 2].values);
        }
    }
    Ok(out)
}
