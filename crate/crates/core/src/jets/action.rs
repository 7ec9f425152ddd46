//! Action of lifted diffeomorphisms on structures over a chart.

use super::chart::Chart;
use super::field::{Domain, JetField};
use super::poly::monomials;
use super::reduce::substitute_pbar;
use super::structure::HigherStructure;
use crate::error::{Error, Result};
use crate::tensor::TensorField;
use num_complex::Complex64 as C;

/// Samples of a chart diffeomorphism `f` and its Wirtinger derivatives at
/// the chart points.
#[derive(Clone, Debug)]
pub struct ChartMap {
    pub value: Vec<C>,
    pub fz: Vec<C>,
    pub fzb: Vec<C>,
}

impl ChartMap {
    /// From a closure returning `(f, ∂f, ∂̄f)` at a point.
    pub fn from_fn(chart: &Chart, f: impl Fn(C) -> (C, C, C)) -> Self {
        let mut m = ChartMap { value: vec![], fz: vec![], fzb: vec![] };
        for &z in chart.points() {
            let (v, a, b) = f(z);
            m.value.push(v);
            m.fz.push(a);
            m.fzb.push(b);
        }
        m
    }

    pub fn identity(chart: &Chart) -> Self {
        Self::from_fn(chart, |z| (z, C::new(1.0, 0.0), C::new(0.0, 0.0)))
    }

    /// Jacobian determinant `|∂f|² - |∂̄f|²` at each sample.
    pub fn jacobian(&self) -> Vec<f64> {
        self.fz.iter().zip(&self.fzb).map(|(a, b)| a.norm_sqr() - b.norm_sqr()).collect()
    }

    fn check(&self) -> Result<()> {
        let m = self.jacobian().into_iter().fold(f64::INFINITY, f64::min);
        if !(m > 0.0) {
            return Err(Error::Orientation(m));
        }
        Ok(())
    }
}

/// Pulls the structure back along `f`: the linear action of `(Df)^{-1}` is
/// substituted into the generator evaluated at `f(z)`, and the resulting
/// ideal is brought back to normal form by repeated substitution.
pub fn act_by_chart_diffeo(chart: &Chart, s: &HigherStructure, f: &ChartMap) -> Result<HigherStructure> {
    s.check_beltrami()?;
    f.check()?;
    if s.len() != chart.len() {
        return Err(Error::Mismatch("structure not sampled on this chart".into()));
    }
    if let Some(z) = f.value.iter().find(|z| !chart.contains(**z)) {
        return Err(Error::Invalid(format!("image point {} leaves the chart", z)));
    }
    let n = s.degree;
    let cap = n - 1;
    let len = chart.len();
    let sigma = s.normalization.pbar_sign();
    let jac = f.jacobian();

    // images of p and p̄ under the lift, as linear forms
    let mut lp = JetField::zero(cap, len);
    let mut lpb = JetField::zero(cap, len);
    let (mut lp10, mut lp01, mut lb10, mut lb01) = (vec![], vec![], vec![], vec![]);
    for i in 0..len {
        let (fz, fzb, j) = (f.fz[i], f.fzb[i], jac[i]);
        // ∂f̄ = conj(∂̄f), ∂̄f̄ = conj(∂f)
        lp10.push(fz.conj() / j);
        lp01.push(-fzb.conj() / j);
        lb10.push(-fzb / j);
        lb01.push(fz / j);
    }
    lp.set_slice(1, 0, lp10);
    lp.set_slice(0, 1, lp01);
    lpb.set_slice(1, 0, lb10);
    lpb.set_slice(0, 1, lb01);

    // generator at f(z) with p, p̄ replaced by the linear forms
    let mut q = lpb.scale(C::new(sigma, 0.0));
    let mut power = lp.clone();
    for k in 2..=n {
        let mk: Vec<C> = f.value.iter().map(|&w| chart.interpolate(&s.mu(k).values, w)).collect();
        let mut term = JetField::zero(cap, len);
        for (a, b) in monomials(1, cap) {
            let v: Vec<C> = power.slice_ref(a, b).iter().zip(&mk).map(|(x, m)| x * m).collect();
            term.set_slice(a, b, v);
        }
        q = q.add(&term)?;
        if k < n {
            power = power.mul(&lp)?;
        }
    }

    // scale so the p̄ coefficient is the normalization sign
    let beta = q.slice(0, 1);
    let mut rest = JetField::zero(cap, len);
    for (a, b) in monomials(1, cap) {
        if (a, b) == (0, 1) {
            continue;
        }
        let v: Vec<C> = q.slice_ref(a, b).iter().zip(&beta).map(|(x, bt)| x * sigma / bt).collect();
        rest.set_slice(a, b, v);
    }

    // σp̄ + rest ≡ 0, i.e. p̄ ≡ -σ·rest; iterate R ← rest(p, -σR)
    let mut r = vec![vec![C::new(0.0, 0.0); len]; cap + 1];
    for _ in 0..=cap {
        let rule: Vec<Vec<C>> = r.iter().map(|v| v.iter().map(|x| x * (-sigma)).collect()).collect();
        r = substitute_pbar(&rest, &rule);
    }
    let mu = (2..=n).map(|k| TensorField::new((1 - k as i32, 1), r[k - 1].clone())).collect();
    let out = HigherStructure { degree: n, normalization: s.normalization, mu };
    if !(out.sup_mu2() < 1.0) {
        return Err(Error::Beltrami(out.sup_mu2()));
    }
    Ok(out)
}
