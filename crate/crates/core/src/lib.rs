//! Higher complex structures on a genus-2 hyperbolic surface.
//!
//! The crate covers the jet/Poisson algebra on cotangent fibers, Hamiltonian
//! flows of n-complex structures, Hodge decomposition of k-Beltrami
//! differentials on a spectral-element model of the Bolza surface, canonical
//! harmonic representatives of orbits of 2-stationary flows, an exact model
//! of the nilpotent jet group, and the degree-3 Hitchin holonomy map through
//! hyperbolic affine spheres.

extern crate blas_src;

pub mod affine_sphere;
pub mod bch;
pub mod config;
pub mod error;
pub mod flows;
pub mod harmonicize;
pub mod hodge;
pub mod jets;
pub mod linalg;
pub mod modeljet;
pub mod report;
pub mod samples;
pub mod selftest;
pub mod surface;
pub mod tensor;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use tensor::TensorField;
