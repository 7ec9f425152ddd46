//! Surface-level checks on the default mesh: holomorphic bases, Hodge
//! splitting, symmetries, flows and harmonic representatives.

use highercx::flows::{decompose_inductive, first_variation, first_variation_maass, flow_integrate, HamiltonianJet};
use highercx::harmonicize::{energy, harmonic_representative, harmonicity_residual, isometry_act, orbit_perturb, HarmonicOptions};
use highercx::hodge::{harmonic_projection, hodge_decompose, project_beltrami, y_space};
use highercx::jets::{HigherStructure, JetField, Normalization};
use highercx::samples;
use highercx::surface::ops::dbar_op;
use highercx::surface::{build_bolza, holomorphic_basis, isometry_pullback, petersson_pairing, random_smooth_field, Isometry, Surface};
use highercx::{Complex64 as C, Error, TensorField};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;

fn surface() -> &'static Surface {
    static S: OnceLock<Surface> = OnceLock::new();
    S.get_or_init(|| build_bolza(14).expect("default mesh"))
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn norm(s: &Surface, t: &TensorField, k: usize) -> f64 {
    petersson_pairing(s, t, t, k).unwrap().re.sqrt()
}

#[test]
fn area_is_four_pi() {
    assert!((surface().area() - 4.0 * std::f64::consts::PI).abs() < 1e-9);
}

#[test]
fn riemann_roch_counts() {
    let s = surface();
    for k in 2..=4 {
        let b = holomorphic_basis(s, k).unwrap();
        assert_eq!(b.dim(), 2 * k - 1);
        assert!(b.gap >= 1e3);
    }
}

#[test]
fn basis_is_orthonormal_and_holomorphic() {
    use highercx::surface::ops::l2_inner;
    let s = surface();
    let b = holomorphic_basis(s, 3).unwrap();
    let ty = (3, 0);
    let ratio = |t: &TensorField| {
        let d = dbar_op(s, t).unwrap();
        (l2_inner(s, &d.values, &d.values, (3, 1)).re / l2_inner(s, &t.values, &t.values, ty).re).sqrt()
    };
    let generic = ratio(&random_smooth_field(s, ty, &mut rng(2)).unwrap());
    for (i, qi) in b.q.iter().enumerate() {
        for (j, qj) in b.q.iter().enumerate() {
            let ip = l2_inner(s, &qi.values, &qj.values, ty);
            let want = if i == j { 1.0 } else { 0.0 };
            assert!((ip - want).norm() < 1e-9, "{} {} {}", i, j, ip);
        }
        assert!(ratio(qi) < 1e-4 * generic);
    }
    assert!(b.smallest[..b.dim()].iter().all(|x| *x < 1e-6));
}

#[test]
fn hodge_split_is_orthogonal() {
    let s = surface();
    let mut r = rng(3);
    for k in [3usize, 4] {
        for _ in 0..3 {
            let mu = samples::beltrami_field(s, k, 1.0, &mut r).unwrap();
            let h = hodge_decompose(s, &mu, k, 1e-8).unwrap();
            assert!(h.residual < 1e-8 && h.orthogonality < 1e-8);
            assert!(h.defect < 1e-12);
            let dw = dbar_op(s, &h.potential).unwrap();
            let back = h.harmonic.add(&dw).unwrap().sub(&mu).unwrap();
            assert!(norm(s, &back, k) < 1e-8 * norm(s, &mu, k));
        }
    }
}

#[test]
fn exact_and_harmonic_inputs() {
    let s = surface();
    let mut r = rng(4);
    let k = 3;
    let w = random_smooth_field(s, (1 - k as i32, 0), &mut r).unwrap();
    let exact = project_beltrami(s, &dbar_op(s, &w).unwrap(), k).unwrap();
    let h = hodge_decompose(s, &exact, k, 1e-8).unwrap();
    assert!(norm(s, &h.harmonic, k) < 1e-10 * norm(s, &exact, k));
    let harm = harmonic_projection(s, &random_smooth_field(s, (1 - k as i32, 1), &mut r).unwrap(), k).unwrap();
    let h = hodge_decompose(s, &harm, k, 1e-8).unwrap();
    assert!(h.harmonic.sub(&harm).unwrap().max_abs() < 1e-10 * harm.max_abs());
    assert!(harmonicity_residual(s, &harm, k).unwrap() < 1e-10);
}

#[test]
fn projection_is_idempotent() {
    let s = surface();
    let y = y_space(s, 4).unwrap();
    let raw = random_smooth_field(s, (-3, 1), &mut rng(5)).unwrap();
    let p1 = y.project(&raw.values);
    let p2 = y.project(&p1);
    let d = p1.iter().zip(&p2).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    assert!(d < 1e-12);
    assert_eq!(y.harmonic_dim(), 7);
}

#[test]
fn wrong_type_is_refused() {
    let s = surface();
    let t = TensorField::zeros((-1, 1), s.n_copies());
    assert!(matches!(hodge_decompose(s, &t, 3, 1e-8), Err(Error::Mismatch(_)) | Err(Error::Invalid(_))));
}

#[test]
fn petersson_pairing_is_hermitian() {
    let s = surface();
    let mut r = rng(6);
    let a = samples::beltrami_field(s, 3, 1.0, &mut r).unwrap();
    let b = samples::beltrami_field(s, 3, 1.0, &mut r).unwrap();
    let ab = petersson_pairing(s, &a, &b, 3).unwrap();
    let ba = petersson_pairing(s, &b, &a, 3).unwrap();
    assert!((ab - ba.conj()).norm() < 1e-12 * ab.norm().max(1.0));
    assert!(petersson_pairing(s, &a, &a, 3).unwrap().re > 0.0);
}

#[test]
fn rotations_form_a_cyclic_group() {
    let s = surface();
    let t = samples::beltrami_field(s, 3, 1.0, &mut rng(7)).unwrap();
    let mut u = t.clone();
    for _ in 0..8 {
        u = isometry_pullback(s, Isometry::rotation(), &u).unwrap();
    }
    assert!(u.sub(&t).unwrap().max_abs() < 1e-12);
    let once = isometry_pullback(s, Isometry::rotation(), &t).unwrap();
    assert!((norm(s, &once, 3) - norm(s, &t, 3)).abs() < 1e-10 * norm(s, &t, 3));
}

#[test]
fn maass_form_matches_direct_form() {
    let s = surface();
    let mut r = rng(8);
    let st = samples::natural_structure(s, 4, 0.3, Normalization::Negative, &mut r).unwrap();
    let w = random_smooth_field(s, (-2, 0), &mut r).unwrap();
    let mut h = JetField::zero(3, s.n_copies());
    h.set_slice(2, 0, w.values);
    let a = first_variation(s, &st, &h).unwrap();
    let b = first_variation_maass(s, &st, &h).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert!(x.sub(y).unwrap().max_abs() < 1e-10);
    }
}

#[test]
fn homogeneous_flow_moves_one_coefficient() {
    let s = surface();
    let mut r = rng(9);
    let st = samples::natural_structure(s, 4, 0.3, Normalization::Negative, &mut r).unwrap();
    let (w, h) = samples::homogeneous_real(s, 3, 3, 0.2, &mut r).unwrap();
    let out = flow_integrate(s, &st, &HamiltonianJet::autonomous(h), &HarmonicOptions::default().flow).unwrap().final_state;
    let want = y_space(s, 4).unwrap().project(&st.mu(4).add(&dbar_op(s, &w).unwrap()).unwrap().values);
    let d = out.mu(4).values.iter().zip(&want).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    assert!(d < 1e-7, "{}", d);
    assert!(out.mu(3).sub(st.mu(3)).unwrap().max_abs() < 1e-9);
    assert_eq!(out.mu(2).max_abs(), 0.0);
}

#[test]
fn degree_one_flows_need_a_chart() {
    let s = surface();
    let st = HigherStructure::zero(3, Normalization::Negative, s.n_copies());
    let mut h = JetField::zero(2, s.n_copies());
    h.set_slice(1, 0, vec![C::new(0.1, 0.0); s.n_copies()]);
    let r = flow_integrate(s, &st, &HamiltonianJet::autonomous(h), &Default::default());
    assert!(matches!(r, Err(Error::Invalid(_))));
}

#[test]
fn decomposition_refuses_degree_one() {
    let s = surface();
    let mut h = JetField::zero(3, s.n_copies());
    h.set_slice(0, 1, vec![C::new(0.1, 0.0); s.n_copies()]);
    assert!(decompose_inductive(s, &HamiltonianJet::autonomous(h), &[], 1e-6).is_err());
}

#[test]
fn harmonic_representative_of_orbit() {
    let s = surface();
    let opts = HarmonicOptions::default();
    let st = samples::natural_structure(s, 3, 0.3, Normalization::Negative, &mut rng(10)).unwrap();
    let (rep, report) = harmonic_representative(s, &st, &opts).unwrap();
    assert!(rep.residuals.iter().all(|r| *r < 1e-7));
    assert!(report.energy_post[0] <= report.energy_pre[0]);
    let (again, r2) = harmonic_representative(s, &rep.structure, &opts).unwrap();
    assert_eq!(r2.passes, 0);
    assert!(again.structure.distance(&rep.structure) < 1e-8);
    let moved = orbit_perturb(s, &rep.structure, 11, 0.1).unwrap();
    assert!(moved.distance(&rep.structure) > 1e-3);
    assert!(energy(s, &moved, 3).unwrap() >= energy(s, &rep.structure, 3).unwrap());
    let (back, _) = harmonic_representative(s, &moved, &opts).unwrap();
    assert!(back.structure.distance(&rep.structure) < 1e-5 * 0.3);
}

#[test]
fn harmonization_commutes_with_rotation() {
    let s = surface();
    let opts = HarmonicOptions::default();
    let st = samples::natural_structure(s, 3, 0.3, Normalization::Negative, &mut rng(12)).unwrap();
    let sigma = Isometry::new(3);
    let a = harmonic_representative(s, &isometry_act(s, sigma, &st).unwrap(), &opts).unwrap().0;
    let b = isometry_act(s, sigma, &harmonic_representative(s, &st, &opts).unwrap().0.structure).unwrap();
    assert!(a.structure.distance(&b) < 1e-8);
}

#[test]
fn harmonization_needs_natural_coordinates() {
    let s = surface();
    let mut st = HigherStructure::zero(3, Normalization::Negative, s.n_copies());
    st.mu_mut(2).values[0] = C::new(0.1, 0.0);
    assert!(harmonic_representative(s, &st, &HarmonicOptions::default()).is_err());
    assert!(orbit_perturb(s, &st, 0, 0.1).is_err());
}
