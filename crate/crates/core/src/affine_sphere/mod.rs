//! The degree-3 Hitchin map through hyperbolic affine spheres: harmonic
//! representative, Pick differential, Blaschke metric, developing frame and
//! holonomy in `SL(3, ℝ)`.

pub mod develop;
pub mod holonomy;
pub mod pick;
pub mod wang;

pub use develop::{develop_frame, DevelopOptions, Sampler, Transport};
pub use holonomy::{eigenvalues, fit_invariant_form, holonomy, FormFit, Holonomy, Real3};
pub use pick::{pick_differential, PickData};
pub use wang::{wang_solve, BlaschkeMetric, WangOptions, WangSystem};

use crate::error::{Error, Result};
use crate::harmonicize::{harmonic_representative, HarmonicOptions, HarmonicReport};
use crate::jets::HigherStructure;
use crate::surface::Surface;
use serde::Serialize;

/// Tolerances of the Fuchsian-locus test.
pub const FUCHSIAN_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct HitchinOptions {
    pub harmonic: HarmonicOptions,
    pub wang: WangOptions,
    pub develop: DevelopOptions,
}

/// Evidence that a holonomy lies on the Fuchsian locus.
#[derive(Clone, Debug, Serialize)]
pub struct FuchsianCheck {
    pub form: FormFit,
    /// `max |λ₂ - 1|` and `max |λ₁λ₃ - 1|` over the generators.
    pub eigen_error: f64,
    /// `max |tr ρ(γ) - ((tr γ)² - 1)|` against the Fuchsian group itself.
    pub trace_error: f64,
    pub fuchsian: bool,
}

pub fn fuchsian_check(s: &Surface, hol: &Holonomy) -> Result<FuchsianCheck> {
    let form = fit_invariant_form(&hol.generators)?;
    let mut eigen_error: f64 = 0.0;
    for g in &hol.generators {
        let ev = eigenvalues(g)?;
        eigen_error = eigen_error.max((ev[1] - 1.0).norm()).max((ev[0] * ev[2] - 1.0).norm());
    }
    let mut trace_error: f64 = 0.0;
    for (g, a) in s.group.generators().iter().zip(&hol.generators) {
        let t = (g.m[0] + g.m[3]).re;
        trace_error = trace_error.max((holonomy::trace(a) - (t * t - 1.0)).abs());
    }
    let sig_ok = form.signature == (2, 1) || form.signature == (1, 2);
    let fuchsian = sig_ok && form.residual < FUCHSIAN_TOL && eigen_error < FUCHSIAN_TOL;
    Ok(FuchsianCheck { form, eigen_error, trace_error, fuchsian })
}

/// Everything produced by [`hitchin_map`].
#[derive(Clone, Debug, Serialize)]
pub struct HitchinReport {
    pub harmonic: HarmonicReport,
    pub pick: PickData,
    pub metric: BlaschkeMetric,
    pub holonomy: Holonomy,
    pub traces: Vec<f64>,
    pub fuchsian: FuchsianCheck,
}

/// Holonomy of the affine sphere with Pick differential `φ`.
pub fn holonomy_from_pick(s: &Surface, p: &PickData, opts: &HitchinOptions) -> Result<(BlaschkeMetric, Holonomy)> {
    let h = wang_solve(s, p, &opts.wang)?;
    let sm = Sampler::new(s, p, &h)?;
    let hol = holonomy(&sm, &s.group, &opts.develop)?;
    Ok((h, hol))
}

/// `I ↦ ρ`: harmonic representative, Pick differential, Blaschke metric,
/// development and holonomy.
pub fn hitchin_map(s: &Surface, st: &HigherStructure, opts: &HitchinOptions) -> Result<HitchinReport> {
    if st.degree != 3 {
        return Err(Error::Invalid(format!("the Hitchin map is implemented for degree 3, got {}", st.degree)));
    }
    let (hs, harmonic) = harmonic_representative(s, st, &opts.harmonic)?;
    let pick = pick_differential(s, &hs.structure)?;
    let (metric, hol) = holonomy_from_pick(s, &pick, opts)?;
    let traces = hol.trace_vector()?;
    let fuchsian = fuchsian_check(s, &hol)?;
    Ok(HitchinReport { harmonic, pick, metric, holonomy: hol, traces, fuchsian })
}
