//! Classical pullback of Beltrami differentials along chart maps.

use crate::error::{Error, Result};
use crate::jets::{Chart, ChartMap};
use num_complex::Complex64 as C;

/// `f*μ = (∂̄f + (μ∘f) conj(∂f)) / (∂f + (μ∘f) conj(∂̄f))`.
pub fn pullback_beltrami(chart: &Chart, f: &ChartMap, mu: &[C]) -> Result<Vec<C>> {
    if mu.len() != chart.points().len() || f.value.len() != mu.len() {
        return Err(Error::Mismatch("samples do not match the chart".into()));
    }
    if let Some(m) = mu.iter().map(|m| m.norm()).find(|m| !(*m < 1.0)) {
        return Err(Error::Beltrami(m));
    }
    let mut out = Vec::with_capacity(mu.len());
    for i in 0..mu.len() {
        let z = f.value[i];
        if !chart.contains(z) {
            return Err(Error::Invalid(format!("image point {} leaves the chart", z)));
        }
        let m = chart.interpolate(mu, z);
        let (fz, fzb) = (f.fz[i], f.fzb[i]);
        let den = fz + m * fzb.conj();
        if den.norm() < 1e-14 * (fz.norm() + fzb.norm()) {
            return Err(Error::Invalid("degenerate pullback denominator".into()));
        }
        out.push((fzb + m * fz.conj()) / den);
    }
    Ok(out)
}
