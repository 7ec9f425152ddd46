//! Exact model of the group of n-jets at 0 of diffeomorphisms of the line
//! tangent to the identity, `x + a₂x² + … + aₙxⁿ`, under composition.
//!
//! Its Lie algebra is the space of vector fields `v(x)∂ₓ` with `v` of
//! order at least 2; everything is done in exact rational arithmetic.

use crate::bch::Lie;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub type Q = BigRational;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// `x + a₂x² + … + aₙxⁿ`; `coeffs[i]` is `a_{i+2}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModelJet {
    n: usize,
    coeffs: Vec<Q>,
}

/// Vector field `(v₂x² + … + vₙxⁿ)∂ₓ`; `coeffs[i]` is `v_{i+2}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VectorField {
    n: usize,
    coeffs: Vec<Q>,
}

/// Full coefficient vector `c₀ … cₙ` of a polynomial mod `x^{n+1}`.
type Poly = Vec<Q>;

fn poly_mul(a: &Poly, b: &Poly, n: usize) -> Poly {
    let mut out = vec![Q::zero(); n + 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n + 1 - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn poly_deriv(a: &Poly, n: usize) -> Poly {
    let mut out = vec![Q::zero(); n + 1];
    for i in 1..=n {
        out[i - 1] = &a[i] * Q::from_integer(BigInt::from(i));
    }
    out
}

impl ModelJet {
    pub fn identity(n: usize) -> Self {
        assert!(n >= 2);
        ModelJet { n, coeffs: vec![Q::zero(); n - 1] }
    }

    /// From `a₂ … aₙ`.
    pub fn new(coeffs: Vec<Q>) -> Self {
        assert!(!coeffs.is_empty());
        ModelJet { n: coeffs.len() + 1, coeffs }
    }

    pub fn truncation(&self) -> usize {
        self.n
    }

    /// Coefficient of `x^k`, `k >= 1`.
    pub fn coeff(&self, k: usize) -> Q {
        match k {
            1 => Q::one(),
            k if k >= 2 && k <= self.n => self.coeffs[k - 2].clone(),
            _ => Q::zero(),
        }
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_identity(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Lowest `k >= 2` with `a_k ≠ 0` (`n + 1` for the identity): the jet lies
    /// in `N^k` exactly for `k` up to this value.
    pub fn filtration(&self) -> usize {
        self.coeffs.iter().position(|c| !c.is_zero()).map(|i| i + 2).unwrap_or(self.n + 1)
    }

    fn poly(&self) -> Poly {
        (0..=self.n).map(|k| if k == 0 { Q::zero() } else { self.coeff(k) }).collect()
    }

    fn from_poly(p: &Poly, n: usize) -> Self {
        debug_assert!(p[0].is_zero() && p[1].is_one());
        ModelJet { n, coeffs: p[2..=n].to_vec() }
    }
}

/// `f ∘ g` modulo `x^{n+1}`.
pub fn mj_compose(f: &ModelJet, g: &ModelJet) -> Result<ModelJet> {
    if f.n != g.n {
        return Err(Error::Mismatch(format!("truncations {} and {}", f.n, g.n)));
    }
    let n = f.n;
    let gp = g.poly();
    let mut out = vec![Q::zero(); n + 1];
    let mut power = gp.clone();
    for k in 1..=n {
        let c = f.coeff(k);
        if !c.is_zero() {
            for (o, t) in out.iter_mut().zip(&power) {
                *o += &c * t;
            }
        }
        power = poly_mul(&power, &gp, n);
    }
    Ok(ModelJet::from_poly(&out, n))
}

/// Compositional inverse, built degree by degree.
pub fn mj_invert(f: &ModelJet) -> ModelJet {
    let n = f.n;
    let mut g = ModelJet::identity(n);
    for k in 2..=n {
        let e = mj_compose(f, &g).expect("same truncation").coeff(k);
        g.coeffs[k - 2] -= e;
    }
    g
}

/// `f g f⁻¹ g⁻¹`.
pub fn mj_commutator(f: &ModelJet, g: &ModelJet) -> Result<ModelJet> {
    let fg = mj_compose(f, g)?;
    let fgf = mj_compose(&fg, &mj_invert(f))?;
    mj_compose(&fgf, &mj_invert(g))
}

impl VectorField {
    pub fn zero(n: usize) -> Self {
        VectorField { n, coeffs: vec![Q::zero(); n - 1] }
    }

    /// From `v₂ … vₙ`.
    pub fn new(coeffs: Vec<Q>) -> Self {
        assert!(!coeffs.is_empty());
        VectorField { n: coeffs.len() + 1, coeffs }
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    fn poly(&self) -> Poly {
        let mut p = vec![Q::zero(); self.n + 1];
        p[2..].clone_from_slice(&self.coeffs);
        p
    }

    /// Applies `v(x) d/dx` to a polynomial.
    fn apply(&self, f: &Poly) -> Poly {
        poly_mul(&self.poly(), &poly_deriv(f, self.n), self.n)
    }
}

impl Lie for VectorField {
    fn add(&self, o: &Self) -> Self {
        VectorField { n: self.n, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() }
    }

    fn scale(&self, num: i64, den: i64) -> Self {
        let s = q(num, den);
        VectorField { n: self.n, coeffs: self.coeffs.iter().map(|a| a * &s).collect() }
    }

    /// `[v, w] = v w' - w v'`, the commutator of the derivations `v∂`, `w∂`.
    fn bracket(&self, o: &Self) -> Self {
        let a = poly_mul(&self.poly(), &poly_deriv(&o.poly(), self.n), self.n);
        let b = poly_mul(&o.poly(), &poly_deriv(&self.poly(), self.n), self.n);
        VectorField { n: self.n, coeffs: (2..=self.n).map(|k| &a[k] - &b[k]).collect() }
    }
}

/// Time-one flow of `v(x)∂ₓ`: `Σ_m (v∂)^m x / m!`, a finite sum since each
/// application raises the order.
pub fn mj_exp(v: &VectorField) -> ModelJet {
    let n = v.n;
    let mut term: Poly = (0..=n).map(|k| if k == 1 { Q::one() } else { Q::zero() }).collect();
    let mut out = term.clone();
    for m in 1..n {
        term = v.apply(&term).into_iter().map(|c| c / Q::from_integer(BigInt::from(m))).collect();
        for (o, t) in out.iter_mut().zip(&term) {
            *o += t;
        }
    }
    ModelJet::from_poly(&out, n)
}

/// Inverse of [`mj_exp`], solved degree by degree (the degree-k coefficient
/// of `exp(v)` is `v_k` plus a polynomial in lower coefficients).
pub fn mj_log(f: &ModelJet) -> VectorField {
    let n = f.n;
    let mut v = VectorField::zero(n);
    for k in 2..=n {
        let e = f.coeff(k) - mj_exp(&v).coeff(k);
        v.coeffs[k - 2] += e;
    }
    v
}

/// Outcome of the structural checks on the lower central series.
#[derive(Clone, Debug, Serialize)]
pub struct CentralSeriesReport {
    pub n: usize,
    pub pairs_checked: usize,
    /// `[N, N^k] ⊂ N^{k+1}` for every sampled pair.
    pub containment: bool,
    /// Degree-k coefficient is additive on `N^k`.
    pub additive_quotients: bool,
    /// `N^n` is central and `N^{n+1}` is trivial.
    pub top_central: bool,
    /// Number of strict inclusions `N^k ⊋ N^{k+1}` with `N^k ≠ {1}`.
    pub nontrivial_steps: usize,
    pub counterexamples: Vec<String>,
}

fn grid(n: usize, k: usize, vals: &[Q]) -> Vec<ModelJet> {
    // all jets in N^k with the free coefficients drawn from `vals`
    let free = n + 1 - k;
    let mut out = vec![];
    let total = vals.len().pow(free as u32);
    for mut idx in 0..total {
        let mut c = vec![Q::zero(); n - 1];
        for slot in c.iter_mut().skip(k - 2) {
            *slot = vals[idx % vals.len()].clone();
            idx /= vals.len();
        }
        out.push(ModelJet::new(c));
    }
    out
}

fn random_jet(rng: &mut ChaCha8Rng, n: usize, k: usize) -> ModelJet {
    let c = (2..=n)
        .map(|d| if d < k { Q::zero() } else { q(rng.gen_range(-9..=9), rng.gen_range(1..=7)) })
        .collect();
    ModelJet::new(c)
}

/// Checks the central-series structure. Small truncations are checked on an
/// exhaustive grid of coefficients, larger ones on seeded random samples.
pub fn mj_central_series(n: usize, seed: u64) -> CentralSeriesReport {
    let mut rep = CentralSeriesReport {
        n,
        pairs_checked: 0,
        containment: true,
        additive_quotients: true,
        top_central: true,
        nontrivial_steps: 0,
        counterexamples: vec![],
    };
    let vals = [q(-1, 1), q(0, 1), q(1, 2), q(2, 1)];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 2..=n {
        let (fs, gs): (Vec<ModelJet>, Vec<ModelJet>) = if n <= 3 {
            (grid(n, 2, &vals), grid(n, k, &vals))
        } else {
            ((0..24).map(|_| random_jet(&mut rng, n, 2)).collect(), (0..24).map(|_| random_jet(&mut rng, n, k)).collect())
        };
        for f in &fs {
            for g in &gs {
                rep.pairs_checked += 1;
                let c = mj_commutator(f, g).expect("same truncation");
                if c.filtration() < k + 1 {
                    rep.containment = false;
                    rep.counterexamples.push(format!("[{:?},{:?}] not in N^{}", f.coeffs, g.coeffs, k + 1));
                }
                if k == n && !c.is_identity() {
                    rep.top_central = false;
                }
            }
        }
        for (a, b) in gs.iter().zip(gs.iter().rev()) {
            let ab = mj_compose(a, b).expect("same truncation");
            if ab.coeff(k) != a.coeff(k) + b.coeff(k) {
                rep.additive_quotients = false;
                rep.counterexamples.push(format!("degree-{} coefficient not additive", k));
            }
        }
        if k < n && gs.iter().any(|g| g.filtration() == k) {
            rep.nontrivial_steps += 1;
        }
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_of_monomials() {
        // (x + x²) ∘ (x + x²) = x + 2x² + 2x³ + x⁴
        let f = ModelJet::new(vec![q(1, 1), q(0, 1), q(0, 1)]);
        let g = mj_compose(&f, &f).unwrap();
        assert_eq!(g.coeffs(), &[q(2, 1), q(2, 1), q(1, 1)]);
    }

    #[test]
    fn inverse_of_quadratic() {
        // (x + x²)⁻¹ = x - x² + 2x³ - 5x⁴ + 14x⁵ (Catalan numbers)
        let f = ModelJet::new(vec![q(1, 1), q(0, 1), q(0, 1), q(0, 1)]);
        assert_eq!(mj_invert(&f).coeffs(), &[q(-1, 1), q(2, 1), q(-5, 1), q(14, 1)]);
    }

    #[test]
    fn exponential_of_quadratic_field() {
        // the flow of x²∂ is x/(1 - x) = x + x² + x³ + …
        let v = VectorField::new(vec![q(1, 1), q(0, 1), q(0, 1), q(0, 1)]);
        assert!(mj_exp(&v).coeffs().iter().all(|c| *c == q(1, 1)));
        assert_eq!(mj_log(&mj_exp(&v)), v);
    }

    #[test]
    fn mismatched_truncations() {
        assert!(mj_compose(&ModelJet::identity(3), &ModelJet::identity(4)).is_err());
    }

    #[test]
    fn filtration_levels() {
        assert_eq!(ModelJet::identity(4).filtration(), 5);
        assert_eq!(ModelJet::new(vec![q(0, 1), q(2, 1), q(1, 1)]).filtration(), 3);
    }

    #[test]
    fn central_series_small_n() {
        for n in 2..=4 {
            let r = mj_central_series(n, 3);
            assert!(r.containment && r.additive_quotients && r.top_central, "{:?}", r.counterexamples);
        }
    }
}
