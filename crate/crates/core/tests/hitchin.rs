//! Affine-sphere holonomy: the Fuchsian point, Wang solver behaviour and
//! symmetries of the Pick differential.

use highercx::affine_sphere::holonomy::{det, rinv, trace};
use highercx::affine_sphere::{fuchsian_check, holonomy_from_pick, wang_solve, HitchinOptions, PickData, WangOptions};
use highercx::surface::ops::l2_inner;
use highercx::surface::{build_bolza, holomorphic_basis, isometry_pullback, Isometry, Surface};
use highercx::Complex64 as C;
use std::sync::OnceLock;

fn surface() -> &'static Surface {
    static S: OnceLock<Surface> = OnceLock::new();
    S.get_or_init(|| build_bolza(14).expect("default mesh"))
}

/// A fixed cubic differential with all five coordinates nonzero.
fn pick(scale: f64) -> PickData {
    let c: Vec<C> = (0..5).map(|j| C::from_polar(scale / (1.0 + j as f64), 0.7 * j as f64 + 0.2)).collect();
    PickData::from_coefficients(surface(), &c).unwrap()
}

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol * x.abs().max(1.0))
}

#[test]
fn zero_differential_is_fuchsian() {
    let s = surface();
    let (h, hol) = holonomy_from_pick(s, &PickData::zero(s).unwrap(), &HitchinOptions::default()).unwrap();
    assert!(h.u.iter().all(|u| u.abs() < 1e-10));
    let f = fuchsian_check(s, &hol).unwrap();
    assert!(f.fuchsian);
    assert!(f.trace_error < 1e-6);
    assert!(hol.det_error < 1e-8 && hol.inverse_defect < 1e-6);
}

#[test]
fn newton_converges_quadratically() {
    let s = surface();
    let h = wang_solve(s, &pick(0.4), &WangOptions::default()).unwrap();
    let r = &h.history;
    assert!(r.len() >= 4, "{:?}", r);
    assert!(*r.last().unwrap() < 1e-10);
    // once in the basin each step roughly squares the residual
    let n = r.len();
    assert!(r[n - 2] < 1e-3 * r[n - 3].max(1e-300).sqrt() || r[n - 2] < 1e-9, "{:?}", r);
    assert!(r.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn metric_depends_on_the_norm_of_phi_only() {
    let s = surface();
    let p = pick(0.4);
    let a = wang_solve(s, &p, &WangOptions::default()).unwrap();
    let b = wang_solve(s, &p.rotate_phase(1.3), &WangOptions::default()).unwrap();
    let d = a.u.iter().zip(&b.u).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    assert!(d < 1e-10, "{}", d);
    assert!(a.u.iter().cloned().fold(f64::MIN, f64::max) > 0.0);
}

#[test]
fn holonomy_lies_in_sl3() {
    let s = surface();
    let (_, hol) = holonomy_from_pick(s, &pick(0.4), &HitchinOptions::default()).unwrap();
    for g in &hol.generators {
        assert!((det(g) - 1.0).abs() < 1e-8);
    }
    assert!(!fuchsian_check(s, &hol).unwrap().fuchsian);
}

#[test]
fn opposite_differential_gives_the_dual_representation() {
    let s = surface();
    let opts = HitchinOptions::default();
    let p = pick(0.4);
    let (_, a) = holonomy_from_pick(s, &p, &opts).unwrap();
    let (_, b) = holonomy_from_pick(s, &p.rotate_phase(std::f64::consts::PI), &opts).unwrap();
    let ta: Vec<f64> = a.generators.iter().map(trace).collect();
    let tb: Vec<f64> = b.generators.iter().map(|g| trace(&rinv(g).unwrap())).collect();
    assert!(close(&ta, &tb, 1e-6), "{:?} {:?}", ta, tb);
    let plain: Vec<f64> = b.generators.iter().map(trace).collect();
    assert!(!close(&ta, &plain, 1e-3));
}

#[test]
fn rotating_the_surface_permutes_the_sides() {
    let s = surface();
    let opts = HitchinOptions::default();
    let p = pick(0.4);
    let basis = holomorphic_basis(s, 3).unwrap();
    let moved = isometry_pullback(s, Isometry::rotation(), &p.phi).unwrap();
    let c: Vec<C> = basis.q.iter().map(|q| l2_inner(s, &moved.values, &q.values, (3, 0))).collect();
    let q = PickData::from_coefficients(s, &c).unwrap();
    assert!(q.phi.sub(&moved).unwrap().max_abs() < 1e-8 * moved.max_abs());
    let (_, a) = holonomy_from_pick(s, &p, &opts).unwrap();
    let (_, b) = holonomy_from_pick(s, &q, &opts).unwrap();
    let ta = a.side_traces();
    let tb = b.side_traces();
    let shifted = |m: usize| (0..8).map(|j| ta[(j + m) % 8]).collect::<Vec<f64>>();
    assert!(close(&tb, &shifted(1), 1e-6) || close(&tb, &shifted(7), 1e-6), "{:?} {:?}", ta, tb);
}
