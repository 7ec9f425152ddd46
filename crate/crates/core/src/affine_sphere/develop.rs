//! Developing the affine sphere: frame transport along paths in the disk.
//!
//! In the conformal coordinate of the disk, with Blaschke metric
//! `e^ψ |dz|²` (`ψ = u + log λ`), centre at the origin and Pick
//! differential `Φ dz³`, the frame `F = (f, f_z, f_z̄)` satisfies
//! `F_z = F U`, `F_z̄ = F V` with
//!
//! ```text
//!     | 0   0        e^ψ/2 |        | 0  e^ψ/2  0         |
//! U = | 1   ψ_z      0     |    V = | 0  0      -Φ̄ e^{-ψ} |
//!     | 0  -Φ e^{-ψ} 0     |        | 1  0      ψ_z̄       |
//! ```
//!
//! and the compatibility `U_z̄ - V_z + VU - UV = 0` is the Wang equation.

use super::pick::PickData;
use super::wang::BlaschkeMetric;
use crate::error::{Error, Result};
use crate::surface::group::side_circle;
use crate::surface::mesh::dlog_lambda;
use crate::surface::{lambda, Mobius, Surface};
use num_complex::Complex64 as C;
use serde::Serialize;
use std::f64::consts::PI;

/// A 3×3 complex matrix, row-major.
pub type Mat3 = [[C; 3]; 3];

pub fn identity3() -> Mat3 {
    let (o, z) = (C::new(1.0, 0.0), C::new(0.0, 0.0));
    [[o, z, z], [z, o, z], [z, z, o]]
}

pub fn mul3(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut c = [[C::new(0.0, 0.0); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                c[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    c
}

fn axpy3(a: &Mat3, s: C, b: &Mat3) -> Mat3 {
    let mut c = *a;
    for i in 0..3 {
        for j in 0..3 {
            c[i][j] += s * b[i][j];
        }
    }
    c
}

pub fn max_diff3(a: &Mat3, b: &Mat3) -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            m = m.max((a[i][j] - b[i][j]).norm());
        }
    }
    m
}

pub fn max_abs3(a: &Mat3) -> f64 {
    a.iter().flatten().map(|x| x.norm()).fold(0.0, f64::max)
}

/// Local coefficients of the frame system at a point of the disk.
#[derive(Clone, Copy, Debug)]
pub struct FrameCoefficients {
    pub e_psi: f64,
    pub psi_z: C,
    pub phi: C,
}

/// Evaluates `u`, `∂u` and `Φ` anywhere in the disk by reducing the point
/// into the octagon and interpolating on the spectral element there.
pub struct Sampler<'a> {
    s: &'a Surface,
    u: Vec<C>,
    uz: Vec<C>,
    phi: Vec<C>,
}

impl<'a> Sampler<'a> {
    pub fn new(s: &'a Surface, p: &PickData, h: &BlaschkeMetric) -> Result<Self> {
        if h.u.len() != s.n_nodes() || p.phi.len() != s.n_copies() {
            return Err(Error::Mismatch("metric or differential not sampled on this surface".into()));
        }
        let nodal: Vec<C> = h.u.iter().map(|&x| C::new(x, 0.0)).collect();
        let u = s.iota(&nodal, (0, 0));
        let (uz, _) = s.wirtinger(&u);
        Ok(Sampler { s, u, uz, phi: p.phi.values.clone() })
    }

    /// `(z₀, g)` with `z₀ = g(z)` in the closed octagon.
    pub fn reduce(&self, z: C) -> Result<(C, Mobius)> {
        if !(z.norm() < 1.0) {
            return Err(Error::Invalid(format!("point {} outside the disk", z)));
        }
        let mut g = Mobius::identity();
        let mut w = z;
        for _ in 0..64 {
            let crossed = (0..8).find(|&j| {
                let (c, rho) = side_circle(j);
                (w - c).norm() < rho * (1.0 - 1e-13)
            });
            match crossed {
                None => return Ok((w, g)),
                Some(j) => {
                    let t = self.s.group.sides[j];
                    w = t.apply(w);
                    g = t.compose(&g);
                }
            }
        }
        Err(Error::Invalid(format!("could not reduce {} into the fundamental domain", z)))
    }

    /// Element and reference coordinates of a point of the octagon.
    fn locate(&self, z: C) -> (usize, f64, f64) {
        let mut arg = z.arg();
        if arg < 0.0 {
            arg += 2.0 * PI;
        }
        // points on a shared radius go to the kite it is the bottom edge of
        let e = (((arg + 1e-9) / (PI / 4.0)).floor() as usize) % 8;
        let kite = &self.s.elements[e].kite;
        let (mut x, mut y) = (0.0, 0.0);
        for _ in 0..50 {
            let f = kite.map(x, y) - z;
            if f.norm() < 1e-15 {
                break;
            }
            let h = 1e-6;
            let fx = (kite.map(x + h, y) - kite.map(x - h, y)) / (2.0 * h);
            let fy = (kite.map(x, y + h) - kite.map(x, y - h)) / (2.0 * h);
            // solve [fx fy] (dx, dy) = -f over the reals
            let det = fx.re * fy.im - fx.im * fy.re;
            let dx = (-f.re * fy.im + f.im * fy.re) / det;
            let dy = (-fx.re * f.im + fx.im * f.re) / det;
            x = (x + dx).clamp(-1.5, 1.5);
            y = (y + dy).clamp(-1.5, 1.5);
            if dx.abs() + dy.abs() < 1e-15 {
                break;
            }
        }
        (e, x, y)
    }

    fn interp(&self, field: &[C], e: usize, lx: &[f64], ly: &[f64]) -> C {
        let n1 = lx.len();
        let base = e * n1 * n1;
        let mut acc = C::new(0.0, 0.0);
        for i in 0..n1 {
            let mut row = C::new(0.0, 0.0);
            for l in 0..n1 {
                row += field[base + i * n1 + l] * ly[l];
            }
            acc += row * lx[i];
        }
        acc
    }

    pub fn coefficients(&self, z: C) -> Result<FrameCoefficients> {
        let (z0, g) = self.reduce(z)?;
        let (e, x, y) = self.locate(z0);
        let lx = self.s.gll.lagrange(x);
        let ly = self.s.gll.lagrange(y);
        let u = self.interp(&self.u, e, &lx, &ly).re;
        let gp = g.deriv(z);
        let uz = self.interp(&self.uz, e, &lx, &ly) * gp;
        let phi = self.interp(&self.phi, e, &lx, &ly) * gp * gp * gp;
        Ok(FrameCoefficients { e_psi: u.exp() * lambda(z), psi_z: uz + dlog_lambda(z), phi })
    }

    /// `U dz + V dz̄` for a displacement `dz`.
    pub fn connection(&self, z: C, dz: C) -> Result<Mat3> {
        let c = self.coefficients(z)?;
        let zero = C::new(0.0, 0.0);
        let half = C::new(c.e_psi / 2.0, 0.0);
        let a = c.phi / c.e_psi;
        let u = [[zero, zero, half], [C::new(1.0, 0.0), c.psi_z, zero], [zero, -a, zero]];
        let v = [[zero, half, zero], [zero, zero, -a.conj()], [C::new(1.0, 0.0), zero, c.psi_z.conj()]];
        let mut m = [[zero; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = u[i][j] * dz + v[i][j] * dz.conj();
            }
        }
        Ok(m)
    }
}

/// Transport `P` with `F(b) = F(a) P` along the segment `[a, b]`, classical
/// RK4 with `steps` steps.
pub fn transport_segment(sm: &Sampler, a: C, b: C, steps: usize) -> Result<Mat3> {
    let dz = b - a;
    let mut p = identity3();
    let dt = 1.0 / steps as f64;
    let m = |t: f64| sm.connection(a + dz * t, dz);
    let mut m0 = m(0.0)?;
    for i in 0..steps {
        let t = i as f64 * dt;
        let mh = m(t + dt / 2.0)?;
        let m1 = m(t + dt)?;
        let k1 = mul3(&p, &m0);
        let k2 = mul3(&axpy3(&p, C::new(dt / 2.0, 0.0), &k1), &mh);
        let k3 = mul3(&axpy3(&p, C::new(dt / 2.0, 0.0), &k2), &mh);
        let k4 = mul3(&axpy3(&p, C::new(dt, 0.0), &k3), &m1);
        for r in 0..3 {
            for c in 0..3 {
                p[r][c] += (k1[r][c] + (k2[r][c] + k3[r][c]) * 2.0 + k4[r][c]) * (dt / 6.0);
            }
        }
        m0 = m1;
    }
    Ok(p)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct DevelopOptions {
    /// Initial RK4 steps per unit Euclidean length.
    pub steps_per_unit: usize,
    /// Relative change between successive halvings accepted.
    pub tol: f64,
    pub max_halvings: usize,
}

impl Default for DevelopOptions {
    fn default() -> Self {
        DevelopOptions { steps_per_unit: 64, tol: 1e-11, max_halvings: 12 }
    }
}

/// Transport along a polyline, with the step size halved until it settles.
#[derive(Clone, Debug)]
pub struct Transport {
    pub matrix: Mat3,
    pub steps: usize,
    pub halvings: usize,
    pub stabilization: f64,
}

fn polyline(sm: &Sampler, path: &[C], per_unit: usize) -> Result<(Mat3, usize)> {
    let mut p = identity3();
    let mut total = 0;
    for w in path.windows(2) {
        let n = (((w[1] - w[0]).norm() * per_unit as f64).ceil() as usize).max(2);
        p = mul3(&p, &transport_segment(sm, w[0], w[1], n)?);
        total += n;
    }
    Ok((p, total))
}

/// Frame transport along `path` (points of the disk joined by segments).
pub fn develop_frame(sm: &Sampler, path: &[C], opts: &DevelopOptions) -> Result<Transport> {
    if path.len() < 2 {
        return Ok(Transport { matrix: identity3(), steps: 0, halvings: 0, stabilization: 0.0 });
    }
    let mut per = opts.steps_per_unit.max(1);
    let (mut p, _) = polyline(sm, path, per)?;
    let mut history = vec![];
    for h in 1..=opts.max_halvings {
        per *= 2;
        let (q, steps) = polyline(sm, path, per)?;
        let change = max_diff3(&p, &q) / max_abs3(&q);
        history.push(change);
        if change <= opts.tol {
            // one Richardson step on the fourth-order pair
            let mut r = q;
            for i in 0..3 {
                for j in 0..3 {
                    r[i][j] += (q[i][j] - p[i][j]) / 15.0;
                }
            }
            return Ok(Transport { matrix: r, steps, halvings: h, stabilization: change });
        }
        p = q;
    }
    Err(Error::Divergence { what: "frame development step halving".into(), history })
}
