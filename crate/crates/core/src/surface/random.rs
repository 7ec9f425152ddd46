//! Seeded smooth automorphic test fields.
//!
//! Sections of type `(a, b)` are built as sums of `Q_j conj(Q_m) λ^e` with
//! `j = a - e`, `m = b - e`, where `Q_j` is a random holomorphic section of
//! type `(j, 0)` formed from products of quadratic and cubic differentials.

use super::basis::holomorphic_basis;
use super::mesh::Surface;
use super::ops::lambda_power;
use crate::error::Result;
use crate::tensor::TensorField;
use num_complex::Complex64 as C;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn gauss(rng: &mut ChaCha8Rng) -> C {
    // Box–Muller
    let (u, v): (f64, f64) = (rng.gen_range(1e-12..1.0), rng.gen());
    C::from_polar((-2.0 * u.ln()).sqrt(), 2.0 * std::f64::consts::PI * v) * std::f64::consts::FRAC_1_SQRT_2
}

fn combo(rng: &mut ChaCha8Rng, q: &[TensorField]) -> Vec<C> {
    let mut out = vec![C::new(0.0, 0.0); q[0].len()];
    for t in q {
        let c = gauss(rng);
        for (o, v) in out.iter_mut().zip(&t.values) {
            *o += c * v;
        }
    }
    out
}

/// Random holomorphic section of type `(j, 0)`, `j ∈ {0, 2, 3, …}`.
pub fn random_holomorphic(s: &Surface, j: usize, rng: &mut ChaCha8Rng) -> Result<Vec<C>> {
    let n = s.n_copies();
    match j {
        0 => Ok(vec![gauss(rng); n]),
        1 => Ok(vec![C::new(0.0, 0.0); n]),
        2 | 3 => Ok(combo(rng, &holomorphic_basis(s, j)?.q)),
        _ => {
            let a = random_holomorphic(s, 2, rng)?;
            let b = random_holomorphic(s, j - 2, rng)?;
            Ok(a.iter().zip(&b).map(|(x, y)| x * y).collect())
        }
    }
}

/// Random smooth section of type `(a, b)` with `a, b <= 1`, normalized to
/// unit maximum modulus.
pub fn random_smooth_field(s: &Surface, ty: (i32, i32), rng: &mut ChaCha8Rng) -> Result<TensorField> {
    let n = s.n_copies();
    let mut out = vec![C::new(0.0, 0.0); n];
    let ok = |j: i32| j == 0 || (2..=6).contains(&j);
    let mut terms = 0;
    for e in (-8..=ty.0.min(ty.1)).rev() {
        let (j, m) = (ty.0 - e, ty.1 - e);
        if !ok(j) || !ok(m) {
            continue;
        }
        let qj = random_holomorphic(s, j as usize, rng)?;
        let qm = random_holomorphic(s, m as usize, rng)?;
        let l = lambda_power(s, e);
        for i in 0..n {
            out[i] += qj[i] * qm[i].conj() * l.values[i];
        }
        terms += 1;
        if terms == 2 {
            break;
        }
    }
    let mx = out.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if mx > 0.0 {
        for v in &mut out {
            *v /= mx;
        }
    }
    Ok(TensorField::new(ty, out))
}
