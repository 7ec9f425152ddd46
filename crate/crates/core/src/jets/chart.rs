//! Standalone square chart `[-h, h]²` inside the disk with Chebyshev
//! collocation derivatives.
//!
//! Collocation differentiates polynomials of degree below the grid size
//! exactly, so algebraic identities of the bracket (Jacobi, Leibniz) can be
//! checked at rounding level on polynomial coefficient data.

use super::field::Domain;
use num_complex::Complex64 as C;
use std::f64::consts::PI;

#[derive(Clone, Debug)]
pub struct Chart {
    n: usize,
    half_width: f64,
    nodes: Vec<f64>,
    dmat: Vec<f64>,
    bary: Vec<f64>,
    points: Vec<C>,
}

impl Chart {
    /// `n × n` Chebyshev–Lobatto grid on `[-h, h]²`.
    pub fn new(n: usize, half_width: f64) -> Self {
        assert!(n >= 3, "chart needs at least 3 points per side");
        let m = n - 1;
        let t: Vec<f64> = (0..n).map(|j| (PI * j as f64 / m as f64).cos()).collect();
        let c: Vec<f64> = (0..n).map(|j| if j == 0 || j == m { 2.0 } else { 1.0 } * if j % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let mut d = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    d[i * n + j] = c[i] / c[j] / (t[i] - t[j]);
                }
            }
        }
        for i in 0..n {
            let s: f64 = (0..n).filter(|&j| j != i).map(|j| d[i * n + j]).sum();
            d[i * n + i] = -s;
        }
        for v in d.iter_mut() {
            *v /= half_width;
        }
        let nodes: Vec<f64> = t.iter().map(|x| x * half_width).collect();
        let bary = (0..n).map(|j| if j == 0 || j == m { 0.5 } else { 1.0 } * if j % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let mut points = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                points.push(C::new(nodes[i], nodes[j]));
            }
        }
        Chart { n, half_width, nodes, dmat: d, bary, points }
    }

    pub fn side(&self) -> usize {
        self.n
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// Sample points, `x` index major.
    pub fn points(&self) -> &[C] {
        &self.points
    }

    pub fn sample(&self, f: impl Fn(C) -> C) -> Vec<C> {
        self.points.iter().map(|&z| f(z)).collect()
    }

    fn dx(&self, f: &[C]) -> Vec<C> {
        let n = self.n;
        let mut out = vec![C::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let w = self.dmat[i * n + k];
                if w == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += f[k * n + j] * w;
                }
            }
        }
        out
    }

    fn dy(&self, f: &[C]) -> Vec<C> {
        let n = self.n;
        let mut out = vec![C::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = C::new(0.0, 0.0);
                for k in 0..n {
                    acc += f[i * n + k] * self.dmat[j * n + k];
                }
                out[i * n + j] = acc;
            }
        }
        out
    }

    fn bary_row(&self, x: f64) -> Vec<f64> {
        if let Some(k) = self.nodes.iter().position(|&t| (t - x).abs() < 1e-15) {
            let mut r = vec![0.0; self.n];
            r[k] = 1.0;
            return r;
        }
        let terms: Vec<f64> = (0..self.n).map(|j| self.bary[j] / (x - self.nodes[j])).collect();
        let s: f64 = terms.iter().sum();
        terms.iter().map(|t| t / s).collect()
    }

    /// Spectral interpolation of grid values at an arbitrary point of the square.
    pub fn interpolate(&self, f: &[C], z: C) -> C {
        let rx = self.bary_row(z.re);
        let ry = self.bary_row(z.im);
        let mut acc = C::new(0.0, 0.0);
        for i in 0..self.n {
            if rx[i] == 0.0 {
                continue;
            }
            let mut row = C::new(0.0, 0.0);
            for j in 0..self.n {
                row += f[i * self.n + j] * ry[j];
            }
            acc += row * rx[i];
        }
        acc
    }

    pub fn contains(&self, z: C) -> bool {
        z.re.abs() <= self.half_width + 1e-12 && z.im.abs() <= self.half_width + 1e-12
    }
}

impl Domain for Chart {
    fn len(&self) -> usize {
        self.n * self.n
    }

    fn d(&self, f: &[C]) -> Vec<C> {
        let fx = self.dx(f);
        let fy = self.dy(f);
        fx.iter().zip(&fy).map(|(a, b)| (a - C::i() * b) * 0.5).collect()
    }

    fn dbar(&self, f: &[C]) -> Vec<C> {
        let fx = self.dx(f);
        let fy = self.dy(f);
        fx.iter().zip(&fy).map(|(a, b)| (a + C::i() * b) * 0.5).collect()
    }
}
