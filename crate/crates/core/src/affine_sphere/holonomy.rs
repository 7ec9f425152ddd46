//! Holonomy of the developed affine sphere and its conjugation invariants.

use super::develop::{develop_frame, identity3, max_abs3, mul3, DevelopOptions, Mat3, Sampler};
use crate::error::{Error, Result};
use crate::surface::group::side_circle;
use crate::surface::{FuchsianGroup, Mobius};
use ndarray::Array2;
use ndarray_linalg::{Eig, Inverse, SVD};
use num_complex::Complex64 as C;
use serde::Serialize;

/// Real 3×3 matrix, row-major.
pub type Real3 = [[f64; 3]; 3];

fn to_array(m: &Real3) -> Array2<f64> {
    Array2::from_shape_fn((3, 3), |(i, j)| m[i][j])
}

fn from_array(a: &Array2<f64>) -> Real3 {
    let mut m = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = a[[i, j]];
        }
    }
    m
}

pub fn rmul(a: &Real3, b: &Real3) -> Real3 {
    let mut c = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                c[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    c
}

pub fn rinv(a: &Real3) -> Result<Real3> {
    Ok(from_array(&to_array(a).inv()?))
}

pub fn trace(a: &Real3) -> f64 {
    a[0][0] + a[1][1] + a[2][2]
}

pub fn det(a: &Real3) -> f64 {
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

fn rdist(a: &Real3, b: &Real3) -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            m = m.max((a[i][j] - b[i][j]).abs());
        }
    }
    m
}

const RID: Real3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

/// Initial frame at the origin: `f = e₃`, `f_x = b e₁`, `f_y = b e₂` with
/// `b = e^{ψ(0)/2}`, so `(f_x, f_y)/b` is `h`-orthonormal and the frame
/// has the affine-sphere volume `det(f, f_x, f_y) = e^ψ`.
fn initial_frame(sm: &Sampler) -> Result<Mat3> {
    let c = sm.coefficients(C::new(0.0, 0.0))?;
    let b = c.e_psi.sqrt();
    let (z, o, i) = (C::new(0.0, 0.0), C::new(1.0, 0.0), C::new(0.0, 1.0));
    // columns f, f_z = b(e₁ - i e₂)/2, f_z̄ = b(e₁ + i e₂)/2
    Ok([[z, o * b / 2.0, o * b / 2.0], [z, -i * b / 2.0, i * b / 2.0], [o, z, z]])
}

/// First point where the segment `a → b` (starting inside) meets a side
/// circle of the octagon, if it does.
fn octagon_exit(a: C, b: C) -> Option<C> {
    let d = b - a;
    let mut best: Option<f64> = None;
    for j in 0..8 {
        let (c, rho) = side_circle(j);
        // |a + t d - c|² = ρ²
        let w = a - c;
        let (qa, qb, qc) = (d.norm_sqr(), 2.0 * (w.conj() * d).re, w.norm_sqr() - rho * rho);
        let disc = qb * qb - 4.0 * qa * qc;
        if disc < 0.0 {
            continue;
        }
        let t = (-qb - disc.sqrt()) / (2.0 * qa);
        if t > 1e-12 && t < 1.0 - 1e-12 && best.map_or(true, |x| t < x) {
            best = Some(t);
        }
    }
    best.map(|t| a + d * t)
}

fn inv3(a: &Mat3) -> Result<Mat3> {
    let m = Array2::from_shape_fn((3, 3), |(i, j)| a[i][j]).inv()?;
    let mut out = [[C::new(0.0, 0.0); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = m[[i, j]];
        }
    }
    Ok(out)
}

/// `ρ(γ)` from the frame developed along the segment `0 → γ(0)`, split
/// where it leaves the octagon (the coefficients are only piecewise smooth):
/// `f∘γ = ρ(γ) f` gives `F(γ0) diag(1, γ'(0), conj γ'(0)) = ρ(γ) F(0)`.
/// Also returns the largest imaginary part discarded.
pub fn holonomy_of(sm: &Sampler, g: &Mobius, opts: &DevelopOptions) -> Result<(Real3, f64, usize)> {
    let zero = C::new(0.0, 0.0);
    let f0 = initial_frame(sm)?;
    let end = g.apply(zero);
    let mut path = vec![zero];
    path.extend(octagon_exit(zero, end));
    path.push(end);
    let t = develop_frame(sm, &path, opts)?;
    let gp = g.deriv(zero);
    let mut d = identity3();
    d[1][1] = gp;
    d[2][2] = gp.conj();
    let a = mul3(&mul3(&mul3(&f0, &t.matrix), &d), &inv3(&f0)?);
    let mut out = [[0.0; 3]; 3];
    let mut imag: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = a[i][j].re;
            imag = imag.max(a[i][j].im.abs());
        }
    }
    Ok((out, imag / max_abs3(&a), t.steps))
}

/// Quadratic form preserved by a set of matrices, fitted by least squares.
#[derive(Clone, Debug, Serialize)]
pub struct FormFit {
    pub form: Real3,
    /// `max ‖AᵀQA - Q‖ / ‖Q‖` over the matrices.
    pub residual: f64,
    /// Numbers of positive and negative eigenvalues of the form.
    pub signature: (usize, usize),
}

pub fn fit_invariant_form(mats: &[Real3]) -> Result<FormFit> {
    let idx = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];
    let basis = |k: usize| {
        let mut q = [[0.0; 3]; 3];
        let (i, j) = idx[k];
        q[i][j] = 1.0;
        q[j][i] = 1.0;
        q
    };
    let mut sys = Array2::<f64>::zeros((9 * mats.len(), 6));
    for (m, a) in mats.iter().enumerate() {
        let at = [[a[0][0], a[1][0], a[2][0]], [a[0][1], a[1][1], a[2][1]], [a[0][2], a[1][2], a[2][2]]];
        for k in 0..6 {
            let q = basis(k);
            let r = rmul(&rmul(&at, &q), a);
            for i in 0..3 {
                for j in 0..3 {
                    sys[[9 * m + 3 * i + j, k]] = r[i][j] - q[i][j];
                }
            }
        }
    }
    let (_, _, vt) = sys.svd(false, true)?;
    let vt = vt.ok_or_else(|| Error::Linalg("SVD returned no right vectors".into()))?;
    let mut q = [[0.0; 3]; 3];
    for k in 0..6 {
        let b = basis(k);
        for i in 0..3 {
            for j in 0..3 {
                q[i][j] += vt[[5, k]] * b[i][j];
            }
        }
    }
    let qn = q.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    let mut residual: f64 = 0.0;
    for a in mats {
        let at = [[a[0][0], a[1][0], a[2][0]], [a[0][1], a[1][1], a[2][1]], [a[0][2], a[1][2], a[2][2]]];
        let r = rmul(&rmul(&at, &q), a);
        let e = (0..3).flat_map(|i| (0..3).map(move |j| (i, j))).map(|(i, j)| (r[i][j] - q[i][j]).powi(2)).sum::<f64>();
        residual = residual.max(e.sqrt() / qn);
    }
    let (ev, _) = to_array(&q).eig()?;
    let pos = ev.iter().filter(|e| e.re > 0.0).count();
    Ok(FormFit { form: q, residual, signature: (pos, 3 - pos) })
}

/// Eigenvalues sorted by decreasing modulus.
pub fn eigenvalues(a: &Real3) -> Result<Vec<C>> {
    let (ev, _) = to_array(a).eig()?;
    let mut v: Vec<C> = ev.to_vec();
    v.sort_by(|x, y| y.norm().partial_cmp(&x.norm()).unwrap());
    Ok(v)
}

/// Holonomy representation on the canonical generators.
#[derive(Clone, Debug, Serialize)]
pub struct Holonomy {
    /// `ρ(γ_j)` for the eight side pairings.
    pub sides: Vec<Real3>,
    /// `ρ(A₁), ρ(B₁), ρ(A₂), ρ(B₂)`.
    pub generators: Vec<Real3>,
    /// `max |det ρ(γ_j) - 1|`.
    pub det_error: f64,
    /// `max ‖ρ(γ_j) ρ(γ_{j+4}) - Id‖`: opposite sides are developed along
    /// independent paths.
    pub inverse_defect: f64,
    /// `‖[ρA₁, ρB₁][ρA₂, ρB₂] - Id‖`.
    pub relation_defect: f64,
    /// Largest relative imaginary part discarded when reading off `ρ`.
    pub imaginary: f64,
    pub steps: usize,
}

impl Holonomy {
    /// Traces of the generators and of the twelve words `g_i g_j^{±1}`,
    /// `i < j`.
    pub fn trace_vector(&self) -> Result<Vec<f64>> {
        let g = &self.generators;
        let mut out: Vec<f64> = g.iter().map(trace).collect();
        for i in 0..4 {
            for j in i + 1..4 {
                out.push(trace(&rmul(&g[i], &g[j])));
                out.push(trace(&rmul(&g[i], &rinv(&g[j])?)));
            }
        }
        Ok(out)
    }

    /// Traces of the eight side pairings.
    pub fn side_traces(&self) -> Vec<f64> {
        self.sides.iter().map(trace).collect()
    }
}

/// Develops along `0 → γ_j(0)` for every side pairing and assembles the
/// generators from their words.
pub fn holonomy(sm: &Sampler, group: &FuchsianGroup, opts: &DevelopOptions) -> Result<Holonomy> {
    let mut sides = vec![];
    let mut imaginary: f64 = 0.0;
    let mut steps = 0;
    for g in &group.sides {
        let (a, im, st) = holonomy_of(sm, g, opts)?;
        sides.push(a);
        imaginary = imaginary.max(im);
        steps += st;
    }
    let generators: Vec<Real3> = group.words.iter().map(|w| w.iter().fold(RID, |acc, &j| rmul(&acc, &sides[j]))).collect();
    let det_error = sides.iter().map(|a| (det(a) - 1.0).abs()).fold(0.0, f64::max);
    let inverse_defect = (0..4).map(|j| rdist(&rmul(&sides[j], &sides[j + 4]), &RID)).fold(0.0, f64::max);
    let comm = |a: &Real3, b: &Real3| -> Result<Real3> { Ok(rmul(&rmul(&rmul(a, b), &rinv(a)?), &rinv(b)?)) };
    let rel = rmul(&comm(&generators[0], &generators[1])?, &comm(&generators[2], &generators[3])?);
    let relation_defect = rdist(&rel, &RID);
    Ok(Holonomy { sides, generators, det_error, inverse_defect, relation_defect, imaginary, steps })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn boost(t: f64) -> Real3 {
        [[t.cosh(), 0.0, t.sinh()], [0.0, 1.0, 0.0], [t.sinh(), 0.0, t.cosh()]]
    }

    fn rot(a: f64) -> Real3 {
        [[a.cos(), -a.sin(), 0.0], [a.sin(), a.cos(), 0.0], [0.0, 0.0, 1.0]]
    }

    #[test]
    fn lorentz_form_recovered() {
        let mats = vec![boost(0.8), rot(0.3), rmul(&boost(-0.2), &rot(1.1))];
        let f = fit_invariant_form(&mats).unwrap();
        assert!(f.residual < 1e-12);
        assert!(f.signature == (2, 1) || f.signature == (1, 2));
        let q = f.form;
        assert!((q[0][0] - q[1][1]).abs() < 1e-12 && (q[0][0] + q[2][2]).abs() < 1e-12);
    }

    #[test]
    fn boost_spectrum() {
        let e = eigenvalues(&boost(0.5)).unwrap();
        assert!((e[0] - 0.5f64.exp()).norm() < 1e-12);
        assert!((e[1] - 1.0).norm() < 1e-12);
        assert!((e[2] - (-0.5f64).exp()).norm() < 1e-12);
    }

    #[test]
    fn generic_matrices_have_no_form() {
        let a = [[2.0, 1.0, 0.0], [0.0, 1.0, 0.3], [0.1, 0.0, 0.5]];
        let b = [[1.0, 0.0, 0.7], [0.2, 1.0, 0.0], [0.0, 0.4, 1.0]];
        assert!(fit_invariant_form(&[a, b]).unwrap().residual > 1e-3);
    }

    #[test]
    fn inverse_and_determinant() {
        let a = rmul(&boost(0.4), &rot(0.9));
        assert!((det(&a) - 1.0).abs() < 1e-14);
        assert!(rdist(&rmul(&a, &rinv(&a).unwrap()), &RID) < 1e-14);
        assert!((trace(&boost(0.0)) - 3.0).abs() < 1e-15);
    }
}
