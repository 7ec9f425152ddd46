//! Inductive and exponential coordinates of 2-stationary flows.
//!
//! The time-one flow of an autonomous `A` acts on generators by `e^{L_A}`
//! with `L_A g = {A, g}`, and `A ↦ L_A` is a Lie algebra map, so flowing
//! `A` and then `B` is the autonomous flow of `BCH(B, A)`. Brackets of
//! Hamiltonians of degrees at least 2 raise the degree, hence the series
//! terminates modulo the degrees that cannot act on n-complex structures
//! and the decompositions below are exact jet computations.

use super::integrate::{flow, HamiltonianJet};
use super::FlowSpace;
use crate::bch::{bch, bch_tail, Lie};
use crate::error::{Error, Result};
use crate::jets::{poisson, HigherStructure, JetField};
use num_complex::Complex64 as C;

/// Highest truncation for which the fourth-order series is exact.
pub const MAX_CAP: usize = 5;

/// A Hamiltonian together with the base its bracket lives on.
pub struct OnBase<'a, D: ?Sized> {
    pub dom: &'a D,
    pub h: JetField,
}

impl<D: ?Sized> Clone for OnBase<'_, D> {
    fn clone(&self) -> Self {
        OnBase { dom: self.dom, h: self.h.clone() }
    }
}

impl<D: FlowSpace + ?Sized> Lie for OnBase<'_, D> {
    fn add(&self, o: &Self) -> Self {
        OnBase { dom: self.dom, h: self.h.add(&o.h).expect("same layout") }
    }

    fn scale(&self, num: i64, den: i64) -> Self {
        OnBase { dom: self.dom, h: self.h.scale(C::new(num as f64 / den as f64, 0.0)) }
    }

    fn bracket(&self, o: &Self) -> Self {
        OnBase { dom: self.dom, h: poisson(self.dom, &self.h, &o.h).expect("same layout") }
    }
}

/// Autonomous Hamiltonian whose time-one flow is the whole piecewise flow.
pub fn total_generator<D: FlowSpace + ?Sized>(dom: &D, h: &HamiltonianJet) -> Result<JetField> {
    let first = h.pieces.first().ok_or_else(|| Error::Invalid("empty Hamiltonian".into()))?;
    if first.1.cap() > MAX_CAP {
        return Err(Error::Invalid(format!("jet cap {} beyond the exact range {}", first.1.cap(), MAX_CAP)));
    }
    let mut g = OnBase { dom, h: JetField::zero(first.1.cap(), first.1.len()) };
    for (d, p) in &h.pieces {
        let piece = OnBase { dom, h: p.scale(C::new(*d, 0.0)) };
        g = bch(&piece, &g);
    }
    Ok(g.h)
}

/// Result of [`decompose_inductive`].
#[derive(Clone, Debug)]
pub struct Decomposition {
    /// `H², …, H^{n-1}`; `parts[i]` is homogeneous of degree `i + 2`.
    pub parts: Vec<JetField>,
    /// Largest coefficient of the residual below degree `k + 1` after the
    /// `k`-th part is removed.
    pub stationarity: Vec<f64>,
    /// Largest action mismatch on the test structures (0 if none given).
    pub action_error: f64,
}

/// Writes a 2-stationary flow as `h₂ h₃ ⋯ h_{n-1}` (applied in that order)
/// of time-one autonomous flows of homogeneous Hamiltonians. With test
/// structures, the recomposed flow is checked against the original.
pub fn decompose_inductive<D: FlowSpace + ?Sized>(
    dom: &D,
    h: &HamiltonianJet,
    tests: &[HigherStructure],
    tol: f64,
) -> Result<Decomposition> {
    if h.pieces.iter().any(|(_, p)| p.max_abs_below(2) > 0.0) {
        return Err(Error::Invalid("decomposition needs a 2-stationary Hamiltonian (no degree-1 part)".into()));
    }
    let g = total_generator(dom, h)?;
    let cap = g.cap();
    let mut residual = OnBase { dom, h: g };
    let mut parts = vec![];
    let mut stationarity = vec![];
    for k in 2..=cap {
        let hk = residual.h.homogeneous(k);
        let minus = OnBase { dom, h: hk.scale(C::new(-1.0, 0.0)) };
        // e^R = e^G e^{-H^k}: what is left after flowing H^k first. With
        // G = H^k + L, the bracket [G, -H^k] is [L, -H^k], so a homogeneous
        // G leaves exactly nothing.
        let rest = OnBase { dom, h: residual.h.sub(&hk)? };
        let xy = rest.bracket(&minus);
        residual = rest.add(&bch_tail(&residual, &minus, &xy));
        let below = residual.h.max_abs_below(k + 1);
        stationarity.push(below);
        if below > tol * (1.0 + hk.max_abs()) {
            return Err(Error::Residual { what: format!("{}-stationarity of the residual", k + 1), value: below, tol });
        }
        parts.push(hk);
    }
    let action_error = if tests.is_empty() { 0.0 } else { action_mismatch(dom, h, &recomposed(&parts), tests)? };
    if action_error > tol.max(1e-6) {
        return Err(Error::Residual { what: "recomposed action".into(), value: action_error, tol: tol.max(1e-6) });
    }
    Ok(Decomposition { parts, stationarity, action_error })
}

/// The sequential flow `h₂, h₃, …` as a piecewise Hamiltonian.
pub fn recomposed(parts: &[JetField]) -> HamiltonianJet {
    HamiltonianJet { pieces: parts.iter().map(|p| (1.0, p.clone())).collect() }
}

/// Largest coefficient difference between the actions of two flows.
pub fn action_mismatch<D: FlowSpace + ?Sized>(
    dom: &D,
    a: &HamiltonianJet,
    b: &HamiltonianJet,
    tests: &[HigherStructure],
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for s in tests {
        let x = flow(dom, s, a)?;
        let y = flow(dom, s, b)?;
        worst = worst.max(x.distance(&y));
    }
    Ok(worst)
}

/// Single autonomous Hamiltonian whose time-one flow equals the sequential
/// flow of `parts`. With test structures, the actions are compared.
pub fn exponential_hamiltonian<D: FlowSpace + ?Sized>(
    dom: &D,
    parts: &[JetField],
    tests: &[HigherStructure],
    tol: f64,
) -> Result<JetField> {
    let seq = recomposed(parts);
    let g = total_generator(dom, &seq)?;
    if !tests.is_empty() {
        let e = action_mismatch(dom, &HamiltonianJet::autonomous(g.clone()), &seq, tests)?;
        if e > tol {
            return Err(Error::Residual { what: "exponential coordinates action".into(), value: e, tol });
        }
    }
    Ok(g)
}
