//! Property tests of the algebraic invariants.

use highercx::bch::bch;
use highercx::config::RunConfig;
use highercx::flows::{flow_integrate, FlowOptions, HamiltonianJet};
use highercx::jets::{poisson, Chart, JetField, JetPoly, Normalization};
use highercx::modeljet::{mj_commutator, mj_compose, mj_exp, mj_invert, mj_log, q, ModelJet, VectorField, Q};
use highercx::samples;
use highercx::surface::group::side_pairing;
use highercx::surface::Mobius;
use highercx::Complex64 as C;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;

fn chart() -> &'static Chart {
    static CH: OnceLock<Chart> = OnceLock::new();
    CH.get_or_init(|| Chart::new(12, 0.4))
}

fn jets(seed: u64, cap: usize) -> (JetField, JetField, JetField) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = chart();
    (samples::chart_jet(c, cap, 2, &mut rng), samples::chart_jet(c, cap, 2, &mut rng), samples::chart_jet(c, cap, 2, &mut rng))
}

fn rel(x: &JetField, parts: &[&JetField]) -> f64 {
    let s = parts.iter().map(|p| p.max_abs()).fold(0.0, f64::max);
    x.max_abs() / s.max(f64::MIN_POSITIVE)
}

fn rational() -> impl Strategy<Value = Q> {
    (-12i64..=12, 1i64..=9).prop_map(|(a, b)| q(a, b))
}

fn model_jet(n: usize) -> impl Strategy<Value = ModelJet> {
    proptest::collection::vec(rational(), n - 1).prop_map(ModelJet::new)
}

fn vector_field(n: usize) -> impl Strategy<Value = VectorField> {
    proptest::collection::vec(rational(), n - 1).prop_map(VectorField::new)
}

fn jet_poly(cap: usize) -> impl Strategy<Value = JetPoly> {
    let n = (cap + 1) * (cap + 2) / 2;
    proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), n).prop_map(move |v| {
        let mut p = JetPoly::zero(cap);
        for (i, (a, b)) in highercx::jets::poly::monomials(1, cap).zip(v) {
            p.set(i.0, i.1, C::new(a, b));
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn bracket_is_antisymmetric(seed in any::<u64>(), cap in 2usize..=5) {
        let (f, g, _) = jets(seed, cap);
        let fg = poisson(chart(), &f, &g).unwrap();
        let gf = poisson(chart(), &g, &f).unwrap();
        prop_assert!(rel(&fg.add(&gf).unwrap(), &[&fg]) < 1e-12);
    }

    #[test]
    fn bracket_satisfies_jacobi(seed in any::<u64>(), cap in 2usize..=5) {
        let (f, g, h) = jets(seed, cap);
        let c = chart();
        let a = poisson(c, &f, &poisson(c, &g, &h).unwrap()).unwrap();
        let b = poisson(c, &g, &poisson(c, &h, &f).unwrap()).unwrap();
        let d = poisson(c, &h, &poisson(c, &f, &g).unwrap()).unwrap();
        prop_assert!(rel(&a.add(&b).unwrap().add(&d).unwrap(), &[&a, &b, &d]) < 1e-10);
    }

    #[test]
    fn bracket_is_a_derivation(seed in any::<u64>(), cap in 2usize..=5) {
        let (f, g, h) = jets(seed, cap);
        let c = chart();
        let lhs = poisson(c, &f, &g.mul(&h).unwrap()).unwrap();
        let a = poisson(c, &f, &g).unwrap().mul(&h).unwrap();
        let b = g.mul(&poisson(c, &f, &h).unwrap()).unwrap();
        prop_assert!(rel(&lhs.sub(&a).unwrap().sub(&b).unwrap(), &[&lhs, &a, &b]) < 1e-10);
    }

    #[test]
    fn jet_product_is_commutative_and_associative(x in jet_poly(4), y in jet_poly(4), z in jet_poly(4)) {
        let xy = x.mul(&y).unwrap();
        let d = xy.add(&y.mul(&x).unwrap().scale(C::new(-1.0, 0.0))).unwrap();
        prop_assert!(d.max_abs() < 1e-14);
        let l = xy.mul(&z).unwrap();
        let r = x.mul(&y.mul(&z).unwrap()).unwrap();
        prop_assert!(l.add(&r.scale(C::new(-1.0, 0.0))).unwrap().max_abs() < 1e-13);
    }

    #[test]
    fn conjugation_is_multiplicative(x in jet_poly(3), y in jet_poly(3)) {
        let a = x.mul(&y).unwrap().conj();
        let b = x.conj().mul(&y.conj()).unwrap();
        prop_assert!(a.add(&b.scale(C::new(-1.0, 0.0))).unwrap().max_abs() < 1e-15);
        prop_assert_eq!(x.conj().conj(), x);
    }

    #[test]
    fn model_group_axioms(f in model_jet(5), g in model_jet(5), h in model_jet(5)) {
        let l = mj_compose(&mj_compose(&f, &g).unwrap(), &h).unwrap();
        let r = mj_compose(&f, &mj_compose(&g, &h).unwrap()).unwrap();
        prop_assert_eq!(l, r);
        prop_assert!(mj_compose(&f, &mj_invert(&f)).unwrap().is_identity());
        prop_assert!(mj_compose(&mj_invert(&f), &f).unwrap().is_identity());
        prop_assert_eq!(mj_compose(&f, &ModelJet::identity(5)).unwrap(), f);
    }

    #[test]
    fn commutators_raise_filtration(f in model_jet(6), g in model_jet(6), k in 2usize..=6) {
        // push g into N^k by clearing its low coefficients
        let mut c: Vec<Q> = g.coeffs().to_vec();
        for x in c.iter_mut().take(k - 2) {
            *x = q(0, 1);
        }
        let g = ModelJet::new(c);
        let com = mj_commutator(&f, &g).unwrap();
        prop_assert!(com.filtration() >= k + 1);
    }

    #[test]
    fn exp_and_log_are_inverse(v in vector_field(6), f in model_jet(6)) {
        prop_assert_eq!(mj_log(&mj_exp(&v)), v);
        prop_assert_eq!(mj_exp(&mj_log(&f)), f);
    }

    #[test]
    fn bch_is_exact_up_to_five(v in vector_field(5), w in vector_field(5)) {
        prop_assert_eq!(mj_compose(&mj_exp(&v), &mj_exp(&w)).unwrap(), mj_exp(&bch(&w, &v)));
    }

    #[test]
    fn config_text_round_trip(seed in any::<u64>(), res in 4usize..30, n in 2usize..=6, tol in 1e-14..1e-2f64) {
        let mut c = RunConfig::default();
        c.seed = seed;
        c.resolution = res;
        c.degree = n;
        c.tol = tol;
        prop_assert_eq!(RunConfig::from_text(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn side_pairings_preserve_the_disk(j in 0usize..8, r in 0.0..0.99f64, t in 0.0..6.3f64) {
        let z = C::from_polar(r, t);
        let g = side_pairing(j);
        prop_assert!(g.apply(z).norm() < 1.0);
        let back: Mobius = g.inverse();
        prop_assert!((back.apply(g.apply(z)) - z).norm() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn normalizations_convert_back(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = samples::chart_structure(chart(), 4, 0.5, Normalization::Negative, &mut rng).unwrap();
        let t = s.convert(Normalization::Positive);
        prop_assert_eq!(t.convert(Normalization::Negative), s);
    }

    #[test]
    fn reversed_flow_returns(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = chart();
        let s = samples::chart_structure(c, 3, 0.3, Normalization::Negative, &mut rng).unwrap();
        let h = HamiltonianJet::autonomous(samples::chart_jet(c, 2, 2, &mut rng).scale(C::new(0.05, 0.0)));
        let opts = FlowOptions { steps_per_unit: 16, stabilize: 1e-11, ..FlowOptions::default() };
        let there = flow_integrate(c, &s, &h, &opts).unwrap().final_state;
        let back = flow_integrate(c, &there, &h.reversed(), &opts).unwrap().final_state;
        prop_assert!(back.distance(&s) < 1e-9, "{}", back.distance(&s));
    }
}
