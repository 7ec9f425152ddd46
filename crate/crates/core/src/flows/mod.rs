//! Hamiltonian flows of n-complex structures: first variation, integration,
//! Beltrami pullback and the decompositions of 2-stationary flows.

pub mod decompose;
pub mod integrate;
pub mod pullback;
pub mod variation;

pub use decompose::{decompose_inductive, exponential_hamiltonian, Decomposition};
pub use integrate::{flow, flow_integrate, FlowOptions, FlowRecord, HamiltonianJet};
pub use pullback::pullback_beltrami;
pub use variation::{first_variation, first_variation_bracket, first_variation_maass};

use crate::error::Result;
use crate::hodge::y_space;
use crate::jets::{Chart, Domain};
use crate::surface::Surface;
use num_complex::Complex64 as C;

/// A base on which structures can be flowed.
pub trait FlowSpace: Domain {
    /// Maps a sampled `μ_k` into the discrete space of k-Beltrami
    /// differentials of the base.
    fn project(&self, k: usize, v: Vec<C>) -> Result<Vec<C>>;

    /// Whether Hamiltonians with a degree-1 part (which move the base
    /// surface) can be flowed here.
    fn supports_degree_one(&self) -> bool;
}

impl FlowSpace for Chart {
    fn project(&self, _k: usize, v: Vec<C>) -> Result<Vec<C>> {
        Ok(v)
    }

    fn supports_degree_one(&self) -> bool {
        true
    }
}

impl FlowSpace for Surface {
    fn project(&self, k: usize, v: Vec<C>) -> Result<Vec<C>> {
        // μ₂ only moves under degree-1 Hamiltonians, which are refused here
        if k < 3 || v.iter().all(|x| *x == C::new(0.0, 0.0)) {
            return Ok(v);
        }
        Ok(y_space(self, k)?.project(&v))
    }

    fn supports_degree_one(&self) -> bool {
        false
    }
}
