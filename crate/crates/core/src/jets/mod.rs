//! Truncated jet algebra on the cotangent fibers, the Poisson bracket of jet
//! fields, normal forms modulo an n-complex structure and the chart action
//! of symplectomorphism lifts.

pub mod action;
pub mod chart;
pub mod field;
pub mod poly;
pub mod reduce;
pub mod structure;

pub use action::{act_by_chart_diffeo, ChartMap};
pub use chart::Chart;
pub use field::{poisson, Domain, JetField};
pub use poly::JetPoly;
pub use reduce::{expand_normal_form, ideal_reduce, normal_form};
pub use structure::{project_structure, HigherStructure, Normalization};

use crate::error::Result;

/// Truncated product of two jets.
pub fn jet_mul(f: &JetPoly, g: &JetPoly) -> Result<JetPoly> {
    f.mul(g)
}

/// Conjugate jet.
pub fn jet_conj(f: &JetPoly) -> JetPoly {
    f.conj()
}

/// Field-level bracket on a domain.
pub fn jet_poisson<D: Domain + ?Sized>(dom: &D, f: &JetField, g: &JetField) -> Result<JetField> {
    poisson(dom, f, g)
}
