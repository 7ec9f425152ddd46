//! Seeded random inputs for the self-checks, examples and tests.

use crate::error::Result;
use crate::hodge::{harmonic_projection, project_beltrami};
use crate::jets::poly::monomials;
use crate::jets::{Chart, HigherStructure, JetField, Normalization};
use crate::surface::ops::dbar_op;
use crate::surface::{random_smooth_field, Surface};
use crate::tensor::TensorField;
use num_complex::Complex64 as C;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn unit(rng: &mut ChaCha8Rng) -> C {
    C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Random complex polynomial in `(x, y)` of total degree `deg`, sampled on
/// the chart, with coefficients of size at most `amp` on the unit scale.
pub fn chart_polynomial(chart: &Chart, deg: usize, amp: f64, rng: &mut ChaCha8Rng) -> Vec<C> {
    let h = chart.half_width();
    let mut terms = vec![];
    for i in 0..=deg {
        for j in 0..=deg - i {
            terms.push((i as i32, j as i32, unit(rng) * amp));
        }
    }
    chart.sample(|z| terms.iter().map(|(i, j, c)| c * (z.re / h).powi(*i) * (z.im / h).powi(*j)).sum())
}

/// Jet field of cap `cap` whose coefficients are random polynomials of
/// degree `deg`. Chebyshev collocation differentiates them exactly while
/// brackets stay below the grid degree.
pub fn chart_jet(chart: &Chart, cap: usize, deg: usize, rng: &mut ChaCha8Rng) -> JetField {
    let mut f = JetField::zero(cap, chart.points().len());
    for (a, b) in monomials(1, cap) {
        f.set_slice(a, b, chart_polynomial(chart, deg, 1.0, rng));
    }
    f
}

/// Degree-`n` structure on the chart with polynomial coefficients and
/// `sup |μ₂| < 1`.
pub fn chart_structure(chart: &Chart, n: usize, amp: f64, norm: Normalization, rng: &mut ChaCha8Rng) -> Result<HigherStructure> {
    let mu = (2..=n as i32)
        .map(|k| {
            let v = chart_polynomial(chart, 2, amp / 6.0, rng);
            TensorField::new((1 - k, 1), v)
        })
        .collect();
    HigherStructure::new(norm, mu)
}

/// Random element of the discrete k-Beltrami space `Y_k` with both a
/// harmonic and a `∂̄`-exact part, scaled to `max |μ| = amp`.
pub fn beltrami_field(s: &Surface, k: usize, amp: f64, rng: &mut ChaCha8Rng) -> Result<TensorField> {
    let w = random_smooth_field(s, (1 - k as i32, 0), rng)?;
    let exact = project_beltrami(s, &dbar_op(s, &w)?, k)?;
    let harm = harmonic_projection(s, &random_smooth_field(s, (1 - k as i32, 1), rng)?, k)?;
    let t = exact.add(&harm)?;
    Ok(t.scale(C::new(amp / t.max_abs(), 0.0)))
}

/// Natural-coordinate structure of degree `n` on the surface with random
/// `μ_3, …, μ_n` in the discrete k-Beltrami spaces.
pub fn natural_structure(s: &Surface, n: usize, amp: f64, norm: Normalization, rng: &mut ChaCha8Rng) -> Result<HigherStructure> {
    let higher = (3..=n).map(|k| beltrami_field(s, k, amp, rng)).collect::<Result<Vec<_>>>()?;
    HigherStructure::natural(norm, higher)
}

/// Random real Hamiltonian `w p^k + conj(w) p̄^k` of a single degree on the
/// surface, with `max |w| = amp`.
pub fn homogeneous_real(s: &Surface, k: usize, cap: usize, amp: f64, rng: &mut ChaCha8Rng) -> Result<(TensorField, JetField)> {
    let w = random_smooth_field(s, (-(k as i32), 0), rng)?.scale(C::new(amp, 0.0));
    let mut h = JetField::zero(cap, s.n_copies());
    h.set_slice(k, 0, w.values.clone());
    h.add_to_slice(0, k, &w.values.iter().map(|v| v.conj()).collect::<Vec<_>>());
    Ok((w, h))
}
