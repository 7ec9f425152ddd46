//! Holomorphic k-differentials as the numerical kernel of `∂̄`.

use super::mesh::Surface;
use super::ops::dbar_matrix;
use crate::error::{Error, Result};
use crate::tensor::TensorField;
use crate::linalg::ThinQr;
use ndarray::Array2;
use num_complex::Complex64 as C;
use serde::Serialize;
use std::sync::Arc;

/// Singular values below this fraction of the largest count as kernel.
pub const KERNEL_CUTOFF: f64 = 1e-6;
/// Required ratio between the first non-kernel and the last kernel value.
pub const MIN_GAP: f64 = 1e3;

/// Orthonormal basis of holomorphic sections of type `(k, 0)`.
#[derive(Clone, Debug, Serialize)]
pub struct HolomorphicBasis {
    pub k: usize,
    /// Copy values of each basis element.
    pub q: Vec<TensorField>,
    /// Nodal values of each basis element.
    #[serde(skip)]
    pub nodal: Vec<Vec<C>>,
    /// Smallest singular values (relative to the largest), ascending.
    pub smallest: Vec<f64>,
    /// `σ_{dim+1} / σ_dim` with singular values in ascending order.
    pub gap: f64,
}

impl HolomorphicBasis {
    pub fn dim(&self) -> usize {
        self.q.len()
    }
}

/// Weighted `∂̄` matrix `S_T B S_N^{-1}` and its scalings.
pub(crate) struct Weighted {
    pub m: Array2<C>,
    pub s_t: Vec<f64>,
    pub s_n: Vec<f64>,
}

pub(crate) fn weighted_dbar(s: &Surface, a: i32) -> Weighted {
    let s_t: Vec<f64> = s.t_weights((a, 1)).into_iter().map(f64::sqrt).collect();
    let s_n: Vec<f64> = s.node_weights((a, 0)).into_iter().map(f64::sqrt).collect();
    let mut m = dbar_matrix(s, a);
    for ((r, c), v) in m.indexed_iter_mut() {
        *v *= s_t[r] / s_n[c];
    }
    Weighted { m, s_t, s_n }
}

/// Computes (and caches on the surface) the holomorphic `k`-differentials.
pub fn holomorphic_basis(s: &Surface, k: usize) -> Result<Arc<HolomorphicBasis>> {
    if k < 2 {
        return Err(Error::Invalid(format!("holomorphic basis needs k >= 2, got {}", k)));
    }
    s.cache.get_or(("holo", k as i64), || compute(s, k))
}

fn compute(s: &Surface, k: usize) -> Result<HolomorphicBasis> {
    let w = weighted_dbar(s, k as i32);
    let f = ThinQr::new(&w.m)?;
    let smax = f.largest_singular();
    // block comfortably larger than any kernel the cutoff could report
    let p = 2 * k + 8;
    let (sv, v) = f.smallest_singular(p)?;
    let rel: Vec<f64> = sv.iter().map(|x| x / smax).collect();
    let dim = rel.iter().filter(|&&x| x < KERNEL_CUTOFF).count();
    let smallest: Vec<f64> = rel.iter().take(dim + 3).copied().collect();
    if dim == 0 || dim + 1 >= p {
        return Err(Error::KernelGap { k: k as i32, tail: smallest });
    }
    let gap = rel[dim] / rel[dim - 1].max(1e-300);
    if gap < MIN_GAP {
        return Err(Error::KernelGap { k: k as i32, tail: smallest });
    }
    let mut q = vec![];
    let mut nodal = vec![];
    for i in 0..dim {
        let x: Vec<C> = v.column(i).iter().zip(&w.s_n).map(|(x, sn)| x / sn).collect();
        q.push(TensorField::new((k as i32, 0), s.iota(&x, (k as i32, 0))));
        nodal.push(x);
    }
    Ok(HolomorphicBasis { k, q, nodal, smallest, gap })
}
