//! Möbius transformations of the disk and the Bolza side pairings.

use num_complex::Complex64 as C;
use serde::Serialize;
use std::f64::consts::PI;

/// `z ↦ (az + b)/(cz + d)` with `ad - bc = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Mobius {
    #[serde(with = "cplx4")]
    pub m: [C; 4],
}

mod cplx4 {
    use num_complex::Complex64 as C;
    use serde::Serializer;
    pub fn serialize<S: Serializer>(m: &[C; 4], s: S) -> Result<S::Ok, S::Error> {
        use serde::Serialize;
        let v: Vec<[f64; 2]> = m.iter().map(|c| [c.re, c.im]).collect();
        v.serialize(s)
    }
}

impl Mobius {
    pub fn identity() -> Self {
        let (o, z) = (C::new(1.0, 0.0), C::new(0.0, 0.0));
        Mobius { m: [o, z, z, o] }
    }

    pub fn rotation(theta: f64) -> Self {
        let h = C::from_polar(1.0, theta / 2.0);
        Mobius { m: [h, C::new(0.0, 0.0), C::new(0.0, 0.0), h.conj()] }
    }

    pub fn apply(&self, z: C) -> C {
        let [a, b, c, d] = self.m;
        (a * z + b) / (c * z + d)
    }

    /// Derivative `1/(cz + d)²`.
    pub fn deriv(&self, z: C) -> C {
        let [_, _, c, d] = self.m;
        let t = c * z + d;
        C::new(1.0, 0.0) / (t * t)
    }

    /// `self ∘ o`.
    pub fn compose(&self, o: &Mobius) -> Mobius {
        let [a, b, c, d] = self.m;
        let [e, f, g, h] = o.m;
        Mobius { m: [a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h] }
    }

    pub fn inverse(&self) -> Mobius {
        let [a, b, c, d] = self.m;
        Mobius { m: [d, -b, -c, a] }
    }

    /// Operator-norm distance to `±Id` (the matrices act projectively).
    pub fn distance_to_identity(&self) -> f64 {
        let one = C::new(1.0, 0.0);
        let dist = |s: f64| {
            let e = [self.m[0] - one * s, self.m[1], self.m[2], self.m[3] - one * s];
            mat2_norm(&e)
        };
        dist(1.0).min(dist(-1.0))
    }
}

/// Spectral norm of a 2×2 complex matrix.
fn mat2_norm(e: &[C; 4]) -> f64 {
    let fro2: f64 = e.iter().map(|x| x.norm_sqr()).sum();
    let det = (e[0] * e[3] - e[1] * e[2]).norm();
    let disc = (fro2 * fro2 - 4.0 * det * det).max(0.0).sqrt();
    ((fro2 + disc) / 2.0).sqrt()
}

/// Euclidean radius of the side midpoints of the regular octagon.
pub fn mid_radius() -> f64 {
    (2f64.sqrt() - 1.0).sqrt()
}

/// Euclidean radius of the octagon vertices.
pub fn vertex_radius() -> f64 {
    2f64.powf(-0.25)
}

/// Center and radius of the geodesic circle carrying side `j`.
pub fn side_circle(j: usize) -> (C, f64) {
    let r = mid_radius();
    let c = (1.0 + r * r) / (2.0 * r);
    let rho = (1.0 - r * r) / (2.0 * r);
    (C::from_polar(c, j as f64 * PI / 4.0), rho)
}

/// Side pairing `γ_j`: hyperbolic translation along the ray through the
/// midpoint of side `j`, mapping side `j` onto side `j + 4`.
pub fn side_pairing(j: usize) -> Mobius {
    let r = mid_radius();
    let a = 2.0 * r / (1.0 + r * r);
    let s = 1.0 / (1.0 - a * a).sqrt();
    let e = C::from_polar(1.0, j as f64 * PI / 4.0);
    Mobius { m: [C::new(s, 0.0), -e * a * s, -e.conj() * a * s, C::new(s, 0.0)] }
}

/// The Fuchsian group of the Bolza surface.
#[derive(Clone, Debug, Serialize)]
pub struct FuchsianGroup {
    /// `γ_0 … γ_7`, with `γ_{j+4} = γ_j⁻¹`.
    pub sides: Vec<Mobius>,
    /// Canonical generators `A₁, B₁, A₂, B₂` as words in the side pairings.
    pub words: Vec<Vec<usize>>,
}

pub const GENERATOR_NAMES: [&str; 4] = ["A1", "B1", "A2", "B2"];

impl FuchsianGroup {
    pub fn bolza() -> Self {
        let sides = (0..8).map(side_pairing).collect();
        // [A₁,B₁][A₂,B₂] = 1 with A₁ = γ₀, B₁ = γ₃, A₂ = γ₂γ₅, B₂ = γ₀γ₃γ₆
        let words = vec![vec![0], vec![3], vec![2, 5], vec![0, 3, 6]];
        FuchsianGroup { sides, words }
    }

    pub fn word(&self, w: &[usize]) -> Mobius {
        w.iter().fold(Mobius::identity(), |acc, &j| acc.compose(&self.sides[j]))
    }

    /// `A₁, B₁, A₂, B₂`.
    pub fn generators(&self) -> Vec<Mobius> {
        self.words.iter().map(|w| self.word(w)).collect()
    }

    /// Distance of `[A₁,B₁][A₂,B₂]` to `±Id`.
    pub fn relation_defect(&self) -> f64 {
        let g = self.generators();
        let comm = |a: &Mobius, b: &Mobius| a.compose(b).compose(&a.inverse()).compose(&b.inverse());
        comm(&g[0], &g[1]).compose(&comm(&g[2], &g[3])).distance_to_identity()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn opposite_sides_are_inverse() {
        for j in 0..4 {
            assert!(side_pairing(j).compose(&side_pairing(j + 4)).distance_to_identity() < 1e-13);
        }
    }

    #[test]
    fn pairing_maps_midpoint_to_opposite_midpoint() {
        let r = mid_radius();
        for j in 0..8 {
            let m = C::from_polar(r, j as f64 * PI / 4.0);
            let want = C::from_polar(r, (j + 4) as f64 * PI / 4.0);
            assert!((side_pairing(j).apply(m) - want).norm() < 1e-13);
        }
    }

    #[test]
    fn surface_relation() {
        assert!(FuchsianGroup::bolza().relation_defect() < 1e-10);
    }

    #[test]
    fn rotation_is_unimodular() {
        let r = Mobius::rotation(0.7);
        let [a, b, c, d] = r.m;
        assert!((a * d - b * c - 1.0).norm() < 1e-15);
        assert!((r.apply(C::new(0.5, 0.0)) - C::from_polar(0.5, 0.7)).norm() < 1e-15);
    }
}
