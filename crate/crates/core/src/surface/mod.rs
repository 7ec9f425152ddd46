//! Discrete Bolza surface: Fuchsian data, spectral-element mesh, tensor
//! fields, operators, pairings and holomorphic bases.

pub mod basis;
pub(crate) mod cache;
pub mod group;
pub mod isometry;
pub mod mesh;
pub mod ops;
pub mod random;

pub use basis::{holomorphic_basis, HolomorphicBasis};
pub use group::{FuchsianGroup, Mobius, GENERATOR_NAMES};
pub use isometry::{isometry_pullback, symmetry_list, Isometry};
pub use mesh::{lambda, Surface};
pub use ops::{dbar_op, integrate_density, maass_d_op, petersson_pairing};
pub use random::random_smooth_field;

use crate::error::Result;
use serde::Serialize;

/// Default polynomial order of the spectral elements.
pub const DEFAULT_RESOLUTION: usize = 14;

/// Builds the Bolza surface at the given element order.
pub fn build_bolza(resolution: usize) -> Result<Surface> {
    Surface::build(resolution)
}

/// Plot/mesh export: node positions, a triangulation of the element grids
/// (in node indices), side pairings and the metric density.
#[derive(Serialize)]
pub struct MeshFile {
    pub schema_version: u32,
    pub order: usize,
    pub vertices: Vec<[f64; 2]>,
    pub triangles: Vec<[usize; 3]>,
    /// `(copy position, partner position, side index)`.
    pub pairings: Vec<([f64; 2], [f64; 2], usize)>,
    pub lambda: Vec<f64>,
    pub area: f64,
    pub relation_defect: f64,
    pub generators: Vec<Mobius>,
}

impl MeshFile {
    pub fn new(s: &Surface) -> Self {
        let xy = |z: num_complex::Complex64| [z.re, z.im];
        let n1 = s.order() + 1;
        let mut triangles = vec![];
        for el in &s.elements {
            for i in 0..n1 - 1 {
                for l in 0..n1 - 1 {
                    let v = |a: usize, b: usize| el.node[a * n1 + b];
                    // nodes identified by a side pairing can coincide; skip
                    // triangles that collapse
                    for t in [[v(i, l), v(i + 1, l), v(i + 1, l + 1)], [v(i, l), v(i + 1, l + 1), v(i, l + 1)]] {
                        if t[0] != t[1] && t[1] != t[2] && t[0] != t[2] {
                            triangles.push(t);
                        }
                    }
                }
            }
        }
        MeshFile {
            schema_version: 1,
            order: s.order(),
            vertices: s.nodes.iter().map(|&z| xy(z)).collect(),
            triangles,
            pairings: s.pairings.iter().map(|&(c, d, j)| (xy(s.copy_z(c)), xy(s.copy_z(d)), j)).collect(),
            lambda: s.lambda_nodes(),
            area: s.area(),
            relation_defect: s.group.relation_defect(),
            generators: s.group.generators(),
        }
    }
}
