//! Normal forms of jets modulo an n-complex structure.

use super::field::JetField;
use super::poly::monomials;
use super::structure::HigherStructure;
use crate::error::{Error, Result};
use crate::tensor::TensorField;
use num_complex::Complex64 as C;

const ZERO: C = C { re: 0.0, im: 0.0 };

/// Powers `S^b`, `b = 0..=cap`, of a `p`-only polynomial given by its
/// coefficients `s[j]` of `p^j` (`s[0]` must vanish), truncated at `cap`.
/// Entry `[b][j]` is the coefficient function of `p^j` in `S^b`.
fn p_powers(s: &[Vec<C>], cap: usize, len: usize) -> Vec<Vec<Vec<C>>> {
    let mut pw = vec![vec![vec![ZERO; len]; cap + 1]; cap + 1];
    pw[0][0] = vec![C::new(1.0, 0.0); len];
    for b in 1..=cap {
        for j in b..=cap {
            let mut acc = vec![ZERO; len];
            for i in 1..=j {
                let (x, y) = (&s[i], &pw[b - 1][j - i]);
                for t in 0..len {
                    acc[t] += x[t] * y[t];
                }
            }
            pw[b][j] = acc;
        }
    }
    pw
}

/// Substitutes `p̄ = S(p)` into `x` and returns the `p`-only result, as
/// coefficient functions of `p^0 … p^cap`.
pub fn substitute_pbar(x: &JetField, s: &[Vec<C>]) -> Vec<Vec<C>> {
    let cap = x.cap();
    let len = x.len();
    let pw = p_powers(s, cap, len);
    let mut out = vec![vec![ZERO; len]; cap + 1];
    for (a, b) in monomials(0, cap) {
        let c = x.slice_ref(a, b);
        if c.iter().all(|v| *v == ZERO) {
            continue;
        }
        for j in a + b..=cap {
            let pj = &pw[b][j - a];
            let o = &mut out[j];
            for t in 0..len {
                o[t] += c[t] * pj[t];
            }
        }
    }
    out
}

/// The relation `p̄ ≡ S(p)` imposed by the structure, as coefficients of
/// `p^0 … p^{n-1}`.
pub fn pbar_rule(s: &HigherStructure) -> Vec<Vec<C>> {
    let n = s.degree;
    let len = s.len();
    let sign = -s.normalization.pbar_sign();
    let mut rule = vec![vec![ZERO; len]; n];
    for k in 2..=n {
        rule[k - 1] = s.mu(k).values.iter().map(|m| m * sign).collect();
    }
    rule
}

/// Unique `p`-only representative of `x` modulo the structure, truncated at
/// degree `n - 1`. Entry `j` is the coefficient of `p^j`.
pub fn normal_form(x: &JetField, s: &HigherStructure) -> Result<Vec<Vec<C>>> {
    s.check_beltrami()?;
    if x.len() != s.len() {
        return Err(Error::Mismatch(format!("jet on {} samples, structure on {}", x.len(), s.len())));
    }
    let cap = s.degree - 1;
    let xc = x.recap(cap);
    Ok(substitute_pbar(&xc, &pbar_rule(s)))
}

/// Normalized form of a Hamiltonian modulo `I`: the sections
/// `w_1, …, w_{n-1}` with `H ≡ Σ w_k p^k`; `w_k` has type `(-k, 0)`.
pub fn ideal_reduce(h: &JetField, s: &HigherStructure) -> Result<Vec<TensorField>> {
    let nf = normal_form(h, s)?;
    Ok((1..s.degree).map(|k| TensorField::new((-(k as i32), 0), nf[k].clone())).collect())
}

/// Re-expands reduced coefficients `w_1 … w_{n-1}` as a jet field.
pub fn expand_normal_form(w: &[TensorField], cap: usize) -> JetField {
    let len = w.first().map(|t| t.len()).unwrap_or(0);
    let mut out = JetField::zero(cap, len);
    for (i, t) in w.iter().enumerate() {
        if i + 1 <= cap {
            out.set_slice(i + 1, 0, t.values.clone());
        }
    }
    out
}
