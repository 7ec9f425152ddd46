//! Canonical harmonic representatives of orbits of 2-stationary flows.
//!
//! Ascending in `k`, the non-harmonic part `∂̄w` of `μ_k` is removed by the
//! time-one flow of the real Hamiltonian `-σ(w p^{k-1} + conj(w) p̄^{k-1})`.
//! That flow is `(k-1)`-stationary, so it moves `μ_k` by exactly `-∂̄w` and
//! leaves the lower coefficients alone.

use crate::error::{Error, Result};
use crate::flows::{flow_integrate, FlowOptions, HamiltonianJet};
use crate::hodge::{hodge_decompose, y_space};
use crate::jets::{HigherStructure, JetField};
use crate::surface::ops::petersson_pairing;
use crate::surface::{isometry_pullback, random_smooth_field, Isometry, Surface};
use crate::tensor::TensorField;
use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Default relative harmonicity tolerance.
pub const HARMONIC_TOL: f64 = 1e-7;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct HarmonicOptions {
    pub tol: f64,
    /// Ascending passes allowed before giving up.
    pub max_passes: usize,
    pub flow: FlowOptions,
}

impl Default for HarmonicOptions {
    fn default() -> Self {
        // the flows used here are polynomial in time, so few steps suffice;
        // step doubling still guards the result
        let flow = FlowOptions { steps_per_unit: 8, stabilize: 1e-10, ..FlowOptions::default() };
        HarmonicOptions { tol: HARMONIC_TOL, max_passes: 4, flow }
    }
}

/// A structure in natural coordinates whose `μ_k`, `k ≥ 3`, are harmonic.
#[derive(Clone, Debug, Serialize)]
pub struct HarmonicStructure {
    pub structure: HigherStructure,
    /// Harmonicity residual of `μ_3, …, μ_n`.
    pub residuals: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HarmonicReport {
    pub degree: usize,
    pub passes: usize,
    /// Residuals of `μ_3, …, μ_n` before and after.
    pub residual_pre: Vec<f64>,
    pub residual_post: Vec<f64>,
    pub energy_pre: Vec<f64>,
    pub energy_post: Vec<f64>,
    /// `max |w|` of every Hamiltonian flowed, in order.
    pub flow_norms: Vec<f64>,
    /// Largest coefficient change from input to output.
    pub displacement: f64,
    /// Relative part of the input outside the discrete k-Beltrami spaces,
    /// dropped before flowing.
    pub input_defect: f64,
}

/// `∫ |μ_k|² g^{k-1}`.
pub fn energy(s: &Surface, st: &HigherStructure, k: usize) -> Result<f64> {
    if k < 3 || k > st.degree {
        return Err(Error::Invalid(format!("energy needs 3 <= k <= {}, got {}", st.degree, k)));
    }
    Ok(petersson_pairing(s, st.mu(k), st.mu(k), k)?.re)
}

/// Petersson-relative size of the non-harmonic part of `μ_k`, including any
/// part outside the discrete k-Beltrami space.
pub fn harmonicity_residual(s: &Surface, mu: &TensorField, k: usize) -> Result<f64> {
    let y = y_space(s, k)?;
    let h = TensorField::new(mu.ty, y.project_harmonic(&mu.values));
    let n = petersson_pairing(s, mu, mu, k)?.re;
    if n == 0.0 {
        return Ok(0.0);
    }
    let e = mu.sub(&h)?;
    Ok((petersson_pairing(s, &e, &e, k)?.re / n).sqrt())
}

fn residuals(s: &Surface, st: &HigherStructure) -> Result<Vec<f64>> {
    (3..=st.degree).map(|k| harmonicity_residual(s, st.mu(k), k)).collect()
}

fn check_natural(s: &Surface, st: &HigherStructure) -> Result<()> {
    if st.len() != s.n_copies() {
        return Err(Error::Mismatch("structure not sampled on this surface".into()));
    }
    if st.sup_mu2() > 0.0 {
        return Err(Error::Invalid("harmonic representatives need natural coordinates (mu_2 = 0)".into()));
    }
    Ok(())
}

/// The real jet `c (w p^d + conj(w) p̄^d)` of cap `cap`.
fn real_monomial(w: &[C], d: usize, c: f64, cap: usize) -> JetField {
    let mut h = JetField::zero(cap, w.len());
    h.set_slice(d, 0, w.iter().map(|v| v * c).collect());
    h.add_to_slice(0, d, &w.iter().map(|v| v.conj() * c).collect::<Vec<_>>());
    h
}

/// The harmonic structure in the orbit of `st` under 2-stationary flows.
pub fn harmonic_representative(
    s: &Surface,
    st: &HigherStructure,
    opts: &HarmonicOptions,
) -> Result<(HarmonicStructure, HarmonicReport)> {
    check_natural(s, st)?;
    let n = st.degree;
    let sigma = st.normalization.pbar_sign();
    let residual_pre = residuals(s, st)?;
    let energy_pre = (3..=n).map(|k| energy(s, st, k)).collect::<Result<Vec<_>>>()?;
    // work inside the discrete k-Beltrami spaces from the start
    let mut cur = st.clone();
    let mut input_defect = 0.0f64;
    for k in 3..=n {
        let y = y_space(s, k)?;
        input_defect = input_defect.max(y.defect(&st.mu(k).values));
        cur.mu_mut(k).values = y.project(&st.mu(k).values);
    }
    let mut flow_norms = vec![];
    let mut history = vec![residual_pre.iter().cloned().fold(0.0, f64::max)];
    let mut passes = 0;
    let mut post = residual_pre.clone();
    while history.last().copied().unwrap_or(0.0) > opts.tol {
        if passes == opts.max_passes {
            return Err(Error::Divergence { what: "harmonicity residual".into(), history });
        }
        passes += 1;
        for k in 3..=n {
            let split = hodge_decompose(s, cur.mu(k), k, crate::hodge::DEFAULT_TOL)?;
            let w = &split.potential.values;
            let size = w.iter().map(|v| v.norm()).fold(0.0, f64::max);
            if size == 0.0 {
                continue;
            }
            flow_norms.push(size);
            let h = real_monomial(w, k - 1, -sigma, n - 1);
            cur = flow_integrate(s, &cur, &HamiltonianJet::autonomous(h), &opts.flow)?.final_state;
        }
        post = residuals(s, &cur)?;
        let worst = post.iter().cloned().fold(0.0, f64::max);
        let last = *history.last().unwrap();
        history.push(worst);
        if worst > opts.tol && worst >= 0.5 * last {
            return Err(Error::Divergence { what: "harmonicity residual".into(), history });
        }
    }
    let energy_post = (3..=n).map(|k| energy(s, &cur, k)).collect::<Result<Vec<_>>>()?;
    let report = HarmonicReport {
        degree: n,
        passes,
        residual_pre,
        residual_post: post.clone(),
        energy_pre,
        energy_post,
        flow_norms,
        displacement: st.distance(&cur),
        input_defect,
    };
    Ok((HarmonicStructure { structure: cur, residuals: post }, report))
}

/// Seeded piecewise 2-stationary real Hamiltonian on `s` for degree-`n`
/// structures: `pieces` pieces, each a random real combination of
/// `p^a p̄^b` with `2 <= a + b <= n - 1`, scaled to `max |coeff| = amplitude`.
pub fn random_two_stationary(s: &Surface, n: usize, pieces: usize, amplitude: f64, seed: u64) -> Result<HamiltonianJet> {
    if n < 3 {
        return Err(Error::Invalid("2-stationary flows act trivially below degree 3".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cap = n - 1;
    let mut out = vec![];
    for _ in 0..pieces {
        let dur = rng.gen_range(0.2..0.6);
        let mut h = JetField::zero(cap, s.n_copies());
        for d in 2..=cap {
            // (a, b) with a >= b; the conjugate slot takes the conjugate
            for b in 0..=d / 2 {
                let a = d - b;
                let c = random_smooth_field(s, (-(a as i32), -(b as i32)), &mut rng)?;
                let c = c.scale(C::new(amplitude * rng.gen_range(0.5..1.0), 0.0));
                let mut v = c.values;
                if a == b {
                    // real-valued coefficient on the diagonal
                    v.iter_mut().for_each(|x| *x = C::new(x.re, 0.0));
                    h.add_to_slice(a, b, &v);
                } else {
                    h.add_to_slice(a, b, &v);
                    h.add_to_slice(b, a, &v.iter().map(|x| x.conj()).collect::<Vec<_>>());
                }
            }
        }
        out.push((dur, h));
    }
    Ok(HamiltonianJet { pieces: out })
}

/// Flows `st` by a seeded random piecewise 2-stationary Hamiltonian of the
/// given amplitude; the result lies in the same orbit.
pub fn orbit_perturb(s: &Surface, st: &HigherStructure, seed: u64, amplitude: f64) -> Result<HigherStructure> {
    check_natural(s, st)?;
    if amplitude == 0.0 {
        return Ok(st.clone());
    }
    let h = random_two_stationary(s, st.degree, 3, amplitude, seed)?;
    Ok(flow_integrate(s, st, &h, &HarmonicOptions::default().flow)?.final_state)
}

/// Pulls every coefficient back along a symmetry of the surface.
pub fn isometry_act(s: &Surface, sigma: Isometry, st: &HigherStructure) -> Result<HigherStructure> {
    let mu = st.mu.iter().map(|m| isometry_pullback(s, sigma, m)).collect::<Result<Vec<_>>>()?;
    HigherStructure::new(st.normalization, mu)
}
