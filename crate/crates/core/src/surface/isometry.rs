//! Rotational symmetries of the Bolza octagon acting on sections.

use super::mesh::Surface;
use crate::error::{Error, Result};
use crate::tensor::TensorField;
use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Rotation `z ↦ e^{imπ/4} z`, `m` mod 8. These normalize the Fuchsian
/// group and map kite `e` onto kite `e + m` with the same local grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Isometry {
    pub m: u8,
}

impl Isometry {
    pub fn identity() -> Self {
        Isometry { m: 0 }
    }

    /// The π/4 rotation generating the list.
    pub fn rotation() -> Self {
        Isometry { m: 1 }
    }

    pub fn new(m: i64) -> Self {
        Isometry { m: m.rem_euclid(8) as u8 }
    }

    pub fn compose(self, o: Isometry) -> Isometry {
        Isometry::new(self.m as i64 + o.m as i64)
    }

    pub fn apply(self, z: C) -> C {
        z * C::from_polar(1.0, self.m as f64 * PI / 4.0)
    }
}

/// All symmetries supported by [`isometry_pullback`].
pub fn symmetry_list() -> Vec<Isometry> {
    (0..8).map(Isometry::new).collect()
}

/// `(σ*t)(z) = t(σz) σ'^a conj(σ')^b`.
pub fn isometry_pullback(s: &Surface, sigma: Isometry, t: &TensorField) -> Result<TensorField> {
    if sigma.m >= 8 {
        return Err(Error::Invalid(format!("isometry {} not in the symmetry list", sigma.m)));
    }
    if t.len() != s.n_copies() {
        return Err(Error::Mismatch("field not sampled on this surface".into()));
    }
    let m = s.per_element();
    let ne = s.elements.len();
    let phase = C::from_polar(1.0, (t.ty.0 - t.ty.1) as f64 * sigma.m as f64 * PI / 4.0);
    let mut out = vec![C::new(0.0, 0.0); t.len()];
    for e in 0..ne {
        let src = (e + sigma.m as usize) % ne;
        for i in 0..m {
            out[e * m + i] = t.values[src * m + i] * phase;
        }
    }
    Ok(TensorField::new(t.ty, out))
}
