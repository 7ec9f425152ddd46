//! The Blaschke metric `h = e^u g` of the affine sphere with Pick
//! differential `φ`, from `Δ_g u = 2e^u - 2 - 4|φ|²_g e^{-2u}`.

use super::pick::PickData;
use crate::error::{Error, Result};
use crate::surface::{lambda, Surface};
use ndarray::{Array1, Array2};
use ndarray_linalg::SolveC;
use serde::Serialize;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct WangOptions {
    /// Pointwise tolerance on the strong-form residual.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for WangOptions {
    fn default() -> Self {
        WangOptions { tol: 1e-10, max_iter: 40 }
    }
}

/// Conformal factor of the Blaschke metric at the nodes.
#[derive(Clone, Debug, Serialize)]
pub struct BlaschkeMetric {
    pub u: Vec<f64>,
    pub residual: f64,
    /// Residual before each Newton step and at the end.
    pub history: Vec<f64>,
    pub iterations: usize,
}

/// Discrete operator: flat stiffness (the Dirichlet energy is conformally
/// invariant), hyperbolic lumped mass and the pointwise `|φ|²_g`.
pub struct WangSystem {
    k: Array2<f64>,
    mass: Vec<f64>,
    pick2: Vec<f64>,
}

impl WangSystem {
    pub fn new(s: &Surface, p: &PickData) -> Result<Self> {
        if p.phi.len() != s.n_copies() {
            return Err(Error::Mismatch("Pick differential not sampled on this surface".into()));
        }
        let n1 = s.order() + 1;
        let m = s.per_element();
        let r = s.n_nodes();
        let d = &s.gll.d;
        let mut k = Array2::<f64>::zeros((r, r));
        for el in &s.elements {
            // ∂̄ of element-local nodal values at each element copy
            let mut b = Array2::<num_complex::Complex64>::zeros((m, m));
            for i in 0..n1 {
                for l in 0..n1 {
                    let t = i * n1 + l;
                    let (zx, ze, dl) = (el.zxi[t], el.zeta[t], el.delta[t]);
                    for q in 0..n1 {
                        b[[t, i * n1 + q]] += zx / dl * d[l * n1 + q];
                        b[[t, q * n1 + l]] -= ze / dl * d[i * n1 + q];
                    }
                }
            }
            // ∫ |∇u|² = 4 ∫ |∂̄u|² for real u
            let wb = Array2::from_shape_fn((m, m), |(t, c)| b[[t, c]] * el.weight[t]);
            let ke = b.t().mapv(|x| x.conj()).dot(&wb);
            for a in 0..m {
                for c in 0..m {
                    k[[el.node[a], el.node[c]]] += 4.0 * ke[[a, c]].re;
                }
            }
        }
        let mut mass = vec![0.0; r];
        let mut pick2 = vec![0.0; r];
        for el in &s.elements {
            for t in 0..m {
                mass[el.node[t]] += el.weight[t] * lambda(el.z[t]);
            }
        }
        // |Φ|² λ^{-3} is invariant; average over the copies of each node
        let phi = &p.phi.values;
        let mut count = vec![0.0; r];
        for (c, (node, z)) in s.copy_nodes().into_iter().zip(s.copy_positions()).enumerate() {
            pick2[node] += phi[c].norm_sqr() * lambda(z).powi(-3);
            count[node] += 1.0;
        }
        for (p, c) in pick2.iter_mut().zip(&count) {
            *p /= c;
        }
        Ok(WangSystem { k, mass, pick2 })
    }

    /// `K u + M (2e^u - 2 - 4|φ|² e^{-2u})`.
    pub fn residual(&self, u: &[f64]) -> Vec<f64> {
        let ku = self.k.dot(&Array1::from(u.to_vec()));
        (0..u.len())
            .map(|r| ku[r] + self.mass[r] * (2.0 * u[r].exp() - 2.0 - 4.0 * self.pick2[r] * (-2.0 * u[r]).exp()))
            .collect()
    }

    /// Largest strong-form residual `|F_r| / m_r`.
    pub fn strong_residual(&self, u: &[f64]) -> f64 {
        self.residual(u).iter().zip(&self.mass).map(|(f, m)| (f / m).abs()).fold(0.0, f64::max)
    }

    fn newton_step(&self, u: &[f64], f: &[f64]) -> Result<Vec<f64>> {
        let mut j = self.k.clone();
        for r in 0..u.len() {
            j[[r, r]] += self.mass[r] * (2.0 * u[r].exp() + 8.0 * self.pick2[r] * (-2.0 * u[r]).exp());
        }
        // the Jacobian is symmetric positive definite
        let rhs: Array1<f64> = f.iter().map(|x| -x).collect();
        Ok(j.solvec(&rhs)?.to_vec())
    }
}

/// Damped Newton iteration from `u = 0`.
pub fn wang_solve(s: &Surface, p: &PickData, opts: &WangOptions) -> Result<BlaschkeMetric> {
    let sys = WangSystem::new(s, p)?;
    let mut u = vec![0.0; s.n_nodes()];
    let mut history = vec![];
    let norm = |f: &[f64]| f.iter().map(|x| x * x).sum::<f64>().sqrt();
    for it in 0..=opts.max_iter {
        let res = sys.strong_residual(&u);
        history.push(res);
        if res <= opts.tol {
            return Ok(BlaschkeMetric { u, residual: res, history, iterations: it });
        }
        if it == opts.max_iter {
            break;
        }
        let f = sys.residual(&u);
        let du = sys.newton_step(&u, &f)?;
        let f0 = norm(&f);
        let mut step = 1.0;
        loop {
            let trial: Vec<f64> = u.iter().zip(&du).map(|(a, b)| a + step * b).collect();
            if norm(&sys.residual(&trial)) < f0 || step < 1e-4 {
                u = trial;
                break;
            }
            step /= 2.0;
        }
    }
    Err(Error::Divergence { what: "Wang equation Newton iteration".into(), history })
}
