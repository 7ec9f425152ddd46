//! Spectral-element model of the Bolza surface.
//!
//! The fundamental octagon is cut into eight kites `(0, M_j, V_j, M_{j+1})`
//! (`M` side midpoints, `V` vertices), each carrying a Gordon–Hall
//! transfinite map from `[-1,1]²` with exact geodesic arcs on the octagon
//! sides, and a tensor-product Gauss–Lobatto–Legendre grid of order `N`.
//!
//! Fields are stored per element node copy ("T-vectors"). A node shared by
//! several elements, or identified with other nodes by the side pairings,
//! has one copy per element; a continuous section is one whose copies agree
//! after the automorphy factors. The nodal unknowns are one value per
//! identification class, at a representative position.

use super::group::{side_circle, FuchsianGroup, Mobius};
use super::group::{mid_radius, vertex_radius};
use crate::error::{Error, Result};
use num_complex::Complex64 as C;
use std::collections::HashMap;
use std::f64::consts::PI;

const ZERO: C = C { re: 0.0, im: 0.0 };

/// Gauss–Lobatto–Legendre nodes, weights and differentiation matrix.
#[derive(Clone, Debug)]
pub struct Gll {
    pub order: usize,
    pub x: Vec<f64>,
    pub w: Vec<f64>,
    /// Row-major `(N+1)²` differentiation matrix.
    pub d: Vec<f64>,
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    // P_n(x) and P_n'(x)
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let dp = if (x * x - 1.0).abs() < 1e-15 { 0.0 } else { n as f64 * (x * p1 - p0) / (x * x - 1.0) };
    (p1, dp)
}

impl Gll {
    pub fn new(order: usize) -> Self {
        let n = order;
        let mut x = vec![0.0; n + 1];
        x[0] = -1.0;
        x[n] = 1.0;
        for i in 1..n {
            // Newton on (1 - x²) P_n'(x) from Chebyshev–Lobatto guesses
            let mut t = -(PI * i as f64 / n as f64).cos();
            for _ in 0..100 {
                let (p, dp) = legendre(n, t);
                // q = P_n', q' from the Legendre ODE: (1-x²)P'' = 2xP' - n(n+1)P
                let ddp = (2.0 * t * dp - (n * (n + 1)) as f64 * p) / (1.0 - t * t);
                let step = dp / ddp;
                t -= step;
                if step.abs() < 1e-16 {
                    break;
                }
            }
            x[i] = t;
        }
        let pn: Vec<f64> = x.iter().map(|&t| legendre(n, t).0).collect();
        let w = pn.iter().map(|p| 2.0 / ((n * (n + 1)) as f64 * p * p)).collect();
        let mut d = vec![0.0; (n + 1) * (n + 1)];
        for i in 0..=n {
            for j in 0..=n {
                if i != j {
                    d[i * (n + 1) + j] = pn[i] / pn[j] / (x[i] - x[j]);
                }
            }
        }
        d[0] = -((n * (n + 1)) as f64) / 4.0;
        d[(n + 1) * (n + 1) - 1] = (n * (n + 1)) as f64 / 4.0;
        Gll { order: n, x, w, d }
    }

    /// Lagrange basis values at `t` for the GLL nodes.
    pub fn lagrange(&self, t: f64) -> Vec<f64> {
        let n = self.x.len();
        (0..n)
            .map(|j| {
                let mut v = 1.0;
                for i in 0..n {
                    if i != j {
                        v *= (t - self.x[i]) / (self.x[j] - self.x[i]);
                    }
                }
                v
            })
            .collect()
    }
}

/// Poincaré-disk conformal factor `λ = 4/(1-|z|²)²` of the hyperbolic metric.
pub fn lambda(z: C) -> f64 {
    let s = 1.0 - z.norm_sqr();
    4.0 / (s * s)
}

/// `∂ log λ = 2 z̄ / (1 - |z|²)`.
pub fn dlog_lambda(z: C) -> C {
    z.conj() * (2.0 / (1.0 - z.norm_sqr()))
}

/// One kite of the octagon: corners and edge parametrizations.
#[derive(Clone, Copy, Debug)]
pub struct Kite {
    pub index: usize,
    pub mj: C,
    pub mk: C,
    pub v: C,
    cj: C,
    ck: C,
    rho: f64,
    a_mj: f64,
    a_vj: f64,
    a_mk: f64,
    a_vk: f64,
}

impl Kite {
    pub fn new(j: usize) -> Self {
        let th = j as f64 * PI / 4.0;
        let mj = C::from_polar(mid_radius(), th);
        let mk = C::from_polar(mid_radius(), th + PI / 4.0);
        let v = C::from_polar(vertex_radius(), th + PI / 8.0);
        let (cj, rho) = side_circle(j);
        let (ck, _) = side_circle(j + 1);
        let a_mj = (mj - cj).arg();
        let a_vj = a_mj + ((v - cj) / (mj - cj)).arg();
        let a_mk = (mk - ck).arg();
        let a_vk = a_mk + ((v - ck) / (mk - ck)).arg();
        Kite { index: j, mj, mk, v, cj, ck, rho, a_mj, a_vj, a_mk, a_vk }
    }

    fn arc(c: C, rho: f64, a0: f64, a1: f64, t: f64) -> C {
        c + C::from_polar(rho, a0 + (1.0 + t) / 2.0 * (a1 - a0))
    }

    /// Transfinite map `[-1,1]² → kite`; corners `(-1,-1) ↦ 0`,
    /// `(1,-1) ↦ M_j`, `(1,1) ↦ V`, `(-1,1) ↦ M_{j+1}`.
    pub fn map(&self, xi: f64, eta: f64) -> C {
        let e_b = self.mj * ((1.0 + xi) / 2.0);
        let e_l = self.mk * ((1.0 + eta) / 2.0);
        let e_r = Self::arc(self.cj, self.rho, self.a_mj, self.a_vj, eta);
        let e_t = Self::arc(self.ck, self.rho, self.a_mk, self.a_vk, xi);
        e_b * ((1.0 - eta) / 2.0) + e_t * ((1.0 + eta) / 2.0) + e_l * ((1.0 - xi) / 2.0) + e_r * ((1.0 + xi) / 2.0)
            - (self.mj * ((1.0 + xi) * (1.0 - eta) / 4.0)
                + self.v * ((1.0 + xi) * (1.0 + eta) / 4.0)
                + self.mk * ((1.0 - xi) * (1.0 + eta) / 4.0))
    }
}

/// Per-element geometry at the node copies.
#[derive(Clone, Debug)]
pub struct Element {
    pub kite: Kite,
    pub z: Vec<C>,
    pub zxi: Vec<C>,
    pub zeta: Vec<C>,
    /// `zξ·conj(zη) - conj(zξ)·zη`
    pub delta: Vec<C>,
    /// GLL weight times area Jacobian.
    pub weight: Vec<f64>,
    /// Node index of each copy.
    pub node: Vec<usize>,
    /// Group element `G` with `z_copy = G(z_node)`.
    pub g: Vec<Mobius>,
    /// `G'(z_node)`.
    pub gp: Vec<C>,
}

/// Spectral-element Bolza surface.
#[derive(Debug)]
pub struct Surface {
    pub group: FuchsianGroup,
    pub gll: Gll,
    pub elements: Vec<Element>,
    /// Representative position of each node.
    pub nodes: Vec<C>,
    /// Copies `(element, local index)` of each node.
    pub copies: Vec<Vec<(usize, usize)>>,
    /// Side-pairing identifications `(copy, partner copy, side index j)`
    /// with `z_partner = γ_j(z_copy)`.
    pub pairings: Vec<(usize, usize, usize)>,
    pub(crate) cache: super::cache::Cache,
}

/// Per-element count of node copies for order `n`.
pub fn copies_per_element(n: usize) -> usize {
    (n + 1) * (n + 1)
}

impl Surface {
    /// Builds the surface at polynomial order `order` (at least 4).
    pub fn build(order: usize) -> Result<Surface> {
        if order < 4 {
            return Err(Error::Invalid(format!("resolution {} below the minimum 4", order)));
        }
        let gll = Gll::new(order);
        let n1 = order + 1;
        let group = FuchsianGroup::bolza();

        // raw positions, deduplicated
        let mut positions: Vec<C> = vec![];
        let mut lookup: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        let key = |z: C| ((z.re * 1e7).round() as i64, (z.im * 1e7).round() as i64);
        let find = |z: C, positions: &Vec<C>, lookup: &HashMap<(i64, i64), Vec<usize>>| -> Option<usize> {
            let (kx, ky) = key(z);
            for dx in -1..=1 {
                for dy in -1..=1 {
                    if let Some(v) = lookup.get(&(kx + dx, ky + dy)) {
                        for &p in v {
                            if (positions[p] - z).norm() < 1e-9 {
                                return Some(p);
                            }
                        }
                    }
                }
            }
            None
        };
        let mut elements = vec![];
        let mut point_of_copy: Vec<Vec<usize>> = vec![];
        for j in 0..8 {
            let kite = Kite::new(j);
            let mut z = Vec::with_capacity(n1 * n1);
            for i in 0..n1 {
                for l in 0..n1 {
                    z.push(kite.map(gll.x[i], gll.x[l]));
                }
            }
            let mut pts = vec![];
            for &zz in &z {
                let p = match find(zz, &positions, &lookup) {
                    Some(p) => p,
                    None => {
                        positions.push(zz);
                        lookup.entry(key(zz)).or_default().push(positions.len() - 1);
                        positions.len() - 1
                    }
                };
                pts.push(p);
            }
            point_of_copy.push(pts);
            let zxi = apply_d(&gll, &z, true);
            let zeta = apply_d(&gll, &z, false);
            let delta: Vec<C> = zxi.iter().zip(&zeta).map(|(a, b)| a * b.conj() - a.conj() * b).collect();
            let mut weight = vec![0.0; n1 * n1];
            for i in 0..n1 {
                for l in 0..n1 {
                    let t = i * n1 + l;
                    let jac = (zxi[t].conj() * zeta[t]).im;
                    if jac <= 0.0 {
                        return Err(Error::Invalid("degenerate element map".into()));
                    }
                    weight[t] = gll.w[i] * gll.w[l] * jac;
                }
            }
            elements.push(Element {
                kite,
                z,
                zxi,
                zeta,
                delta,
                weight,
                node: vec![],
                g: vec![],
                gp: vec![],
            });
        }

        // side-pairing adjacency between geometric points
        let np = positions.len();
        let mut adj: Vec<Vec<(usize, Mobius)>> = vec![vec![]; np];
        let mut side_pairs = vec![];
        for j in 0..4 {
            let g = group.sides[j];
            let (c, rho) = side_circle(j);
            for p in 0..np {
                if ((positions[p] - c).norm() - rho).abs() < 1e-9 {
                    let q = find(g.apply(positions[p]), &positions, &lookup)
                        .ok_or_else(|| Error::Invalid("side pairing misses mesh nodes".into()))?;
                    adj[p].push((q, g));
                    adj[q].push((p, g.inverse()));
                    side_pairs.push((p, q, j));
                }
            }
        }
        // identification classes by search; G maps the representative to the point
        let mut rep = vec![usize::MAX; np];
        let mut gmap = vec![Mobius::identity(); np];
        let mut reps = vec![];
        for p0 in 0..np {
            if rep[p0] != usize::MAX {
                continue;
            }
            rep[p0] = reps.len();
            reps.push(p0);
            let mut stack = vec![p0];
            while let Some(p) = stack.pop() {
                for &(q, g) in &adj[p] {
                    if rep[q] == usize::MAX {
                        rep[q] = rep[p0];
                        gmap[q] = g.compose(&gmap[p]);
                        stack.push(q);
                    }
                }
            }
        }
        let nodes: Vec<C> = reps.iter().map(|&p| positions[p]).collect();
        let mut copies = vec![vec![]; nodes.len()];
        for (e, el) in elements.iter_mut().enumerate() {
            for (t, &p) in point_of_copy[e].iter().enumerate() {
                let r = rep[p];
                let g = gmap[p];
                if (g.apply(nodes[r]) - el.z[t]).norm() > 1e-9 {
                    return Err(Error::Invalid("inconsistent identification".into()));
                }
                el.node.push(r);
                el.g.push(g);
                el.gp.push(g.deriv(nodes[r]));
                copies[r].push((e, t));
            }
        }
        // pairings between copies, for export and automorphy checks
        let first_copy = |p: usize, elements: &Vec<Element>| -> usize {
            for (e, pts) in point_of_copy.iter().enumerate() {
                if let Some(t) = pts.iter().position(|&x| x == p) {
                    return e * n1 * n1 + t;
                }
            }
            let _ = elements;
            unreachable!()
        };
        let pairings = side_pairs.iter().map(|&(p, q, j)| (first_copy(p, &elements), first_copy(q, &elements), j)).collect();

        Ok(Surface { group, gll, elements, nodes, copies, pairings, cache: Default::default() })
    }

    pub fn order(&self) -> usize {
        self.gll.order
    }

    /// Number of element node copies (length of a T-vector).
    pub fn n_copies(&self) -> usize {
        self.elements.len() * copies_per_element(self.order())
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn per_element(&self) -> usize {
        copies_per_element(self.order())
    }

    /// Position of copy `c`.
    pub fn copy_z(&self, c: usize) -> C {
        let m = self.per_element();
        self.elements[c / m].z[c % m]
    }

    pub fn copy_positions(&self) -> Vec<C> {
        self.elements.iter().flat_map(|e| e.z.iter().copied()).collect()
    }

    pub fn copy_weights(&self) -> Vec<f64> {
        self.elements.iter().flat_map(|e| e.weight.iter().copied()).collect()
    }

    pub fn copy_nodes(&self) -> Vec<usize> {
        self.elements.iter().flat_map(|e| e.node.iter().copied()).collect()
    }

    /// `λ` at every copy.
    pub fn lambda_t(&self) -> Vec<f64> {
        self.copy_positions().into_iter().map(lambda).collect()
    }

    /// `λ` at the node representatives.
    pub fn lambda_nodes(&self) -> Vec<f64> {
        self.nodes.iter().map(|&z| lambda(z)).collect()
    }

    /// Automorphy factor `G'^{-a} conj(G')^{-b}` carrying a nodal value of
    /// type `(a, b)` to each copy.
    pub fn automorphy_factors(&self, ty: (i32, i32)) -> Vec<C> {
        self.elements
            .iter()
            .flat_map(|e| e.gp.iter().map(move |&gp| gp.powi(-ty.0) * gp.conj().powi(-ty.1)))
            .collect()
    }

    /// Quadrature weight of the natural pointwise inner product on sections
    /// of type `(a, b)` at each copy: `w·J·λ^{1-a-b}`.
    pub fn t_weights(&self, ty: (i32, i32)) -> Vec<f64> {
        let e = 1 - ty.0 - ty.1;
        self.elements
            .iter()
            .flat_map(|el| el.z.iter().zip(&el.weight).map(move |(&z, &w)| w * lambda(z).powi(e)))
            .collect()
    }

    /// Nodal weights `Σ_copies w_T |factor|²` for type `(a, b)`.
    pub fn node_weights(&self, ty: (i32, i32)) -> Vec<f64> {
        let wt = self.t_weights(ty);
        let fac = self.automorphy_factors(ty);
        let mut w = vec![0.0; self.n_nodes()];
        for (c, r) in self.copy_nodes().into_iter().enumerate() {
            w[r] += wt[c] * fac[c].norm_sqr();
        }
        w
    }

    /// Nodal values to copies.
    pub fn iota(&self, nodal: &[C], ty: (i32, i32)) -> Vec<C> {
        let fac = self.automorphy_factors(ty);
        self.copy_nodes().into_iter().enumerate().map(|(c, r)| nodal[r] * fac[c]).collect()
    }

    /// Weighted least-squares nodal values of a T-vector (left inverse of ι).
    pub fn to_nodal(&self, t: &[C], ty: (i32, i32)) -> Vec<C> {
        let wt = self.t_weights(ty);
        let fac = self.automorphy_factors(ty);
        let mut num = vec![ZERO; self.n_nodes()];
        let mut den = vec![0.0; self.n_nodes()];
        for (c, r) in self.copy_nodes().into_iter().enumerate() {
            num[r] += fac[c].conj() * t[c] * wt[c];
            den[r] += wt[c] * fac[c].norm_sqr();
        }
        num.iter().zip(&den).map(|(a, b)| a / b).collect()
    }

    /// Largest mismatch between copies of the same node after removing the
    /// automorphy factors, relative to the largest value.
    pub fn automorphy_residual(&self, t: &[C], ty: (i32, i32)) -> f64 {
        let fac = self.automorphy_factors(ty);
        let nodes = self.copy_nodes();
        let mut first: Vec<Option<C>> = vec![None; self.n_nodes()];
        let mut worst: f64 = 0.0;
        let scale = t.iter().zip(&fac).map(|(v, f)| (v / f).norm()).fold(0.0, f64::max).max(1e-300);
        for (c, &r) in nodes.iter().enumerate() {
            let v = t[c] / fac[c];
            match first[r] {
                None => first[r] = Some(v),
                Some(v0) => worst = worst.max((v - v0).norm()),
            }
        }
        worst / scale
    }

    /// Residual of the side-pairing rule `t(γv)·γ'(v)^a·conj(γ'(v))^b = t(v)`
    /// over the stored pairings, relative to the largest value.
    pub fn pairing_residual(&self, t: &[C], ty: (i32, i32)) -> f64 {
        let mut worst: f64 = 0.0;
        let mut scale: f64 = 1e-300;
        for &(c, d, j) in &self.pairings {
            let g = self.group.sides[j];
            let gp = g.deriv(self.copy_z(c));
            let lhs = t[d] * gp.powi(ty.0) * gp.conj().powi(ty.1);
            worst = worst.max((lhs - t[c]).norm());
            scale = scale.max(t[c].norm());
        }
        worst / scale
    }

    /// Side length in the hyperbolic metric of each octagon vertex from 0.
    pub fn vertex_distances(&self) -> Vec<f64> {
        (0..8)
            .map(|j| {
                let r = C::from_polar(vertex_radius(), (j as f64 + 0.5) * PI / 4.0).norm();
                2.0 * r.atanh()
            })
            .collect()
    }

    /// `∫ λ dx dy`.
    pub fn area(&self) -> f64 {
        self.elements.iter().map(|e| e.z.iter().zip(&e.weight).map(|(&z, &w)| w * lambda(z)).sum::<f64>()).sum()
    }

    /// Elementwise `∂_ξ` (`xi = true`) or `∂_η` of a T-vector.
    fn ref_derivs(&self, f: &[C]) -> (Vec<C>, Vec<C>) {
        let m = self.per_element();
        let mut fx = Vec::with_capacity(f.len());
        let mut fe = Vec::with_capacity(f.len());
        for e in 0..self.elements.len() {
            let s = &f[e * m..(e + 1) * m];
            fx.extend(apply_d(&self.gll, s, true));
            fe.extend(apply_d(&self.gll, s, false));
        }
        (fx, fe)
    }

    /// Elementwise Wirtinger derivatives `(∂f, ∂̄f)` of a T-vector.
    pub fn wirtinger(&self, f: &[C]) -> (Vec<C>, Vec<C>) {
        let (fx, fe) = self.ref_derivs(f);
        let m = self.per_element();
        let mut dz = vec![ZERO; f.len()];
        let mut dzb = vec![ZERO; f.len()];
        for (e, el) in self.elements.iter().enumerate() {
            for t in 0..m {
                let c = e * m + t;
                let (zx, ze, dl) = (el.zxi[t], el.zeta[t], el.delta[t]);
                dz[c] = (ze.conj() * fx[c] - zx.conj() * fe[c]) / dl;
                dzb[c] = (zx * fe[c] - ze * fx[c]) / dl;
            }
        }
        (dz, dzb)
    }
}

/// Applies the 1D GLL derivative along the first (`xi`) or second index of a
/// tensor-product element vector.
pub(crate) fn apply_d(gll: &Gll, f: &[C], xi: bool) -> Vec<C> {
    let n1 = gll.order + 1;
    let mut out = vec![ZERO; n1 * n1];
    for i in 0..n1 {
        for l in 0..n1 {
            let mut acc = ZERO;
            if xi {
                for k in 0..n1 {
                    acc += f[k * n1 + l] * gll.d[i * n1 + k];
                }
            } else {
                for k in 0..n1 {
                    acc += f[i * n1 + k] * gll.d[l * n1 + k];
                }
            }
            out[i * n1 + l] = acc;
        }
    }
    out
}

impl crate::jets::Domain for Surface {
    fn len(&self) -> usize {
        self.n_copies()
    }

    fn d(&self, f: &[C]) -> Vec<C> {
        self.wirtinger(f).0
    }

    fn dbar(&self, f: &[C]) -> Vec<C> {
        self.wirtinger(f).1
    }
}
