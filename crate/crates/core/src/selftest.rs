//! The acceptance suite as a library: each criterion runs its checks at the
//! stated tolerances and reports the measured values. Reports carry no
//! timings, so two runs with the same configuration serialize identically.

use crate::affine_sphere::{hitchin_map, HitchinOptions};
use crate::bch::bch;
use crate::config::RunConfig;
use crate::error::Result;
use crate::flows::decompose::{action_mismatch, recomposed};
use crate::flows::{decompose_inductive, first_variation, first_variation_maass, flow_integrate, FlowOptions, HamiltonianJet};
use crate::harmonicize::{energy, harmonic_representative, isometry_act, orbit_perturb, HarmonicOptions};
use crate::hodge::{hodge_decompose, y_space};
use crate::jets::{poisson, Chart, HigherStructure, JetField, Normalization};
use crate::modeljet::{mj_central_series, mj_compose, mj_exp, mj_invert, mj_log, q, ModelJet, VectorField, Q};
use crate::samples;
use crate::surface::ops::dbar_op;
use crate::surface::{build_bolza, holomorphic_basis, random_smooth_field, Isometry, Surface};
use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// One measured quantity against its limit.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub what: String,
    pub value: f64,
    /// `value <= limit` passes, unless `at_least` is set.
    pub limit: f64,
    pub at_least: bool,
    pub pass: bool,
}

impl Check {
    pub fn below(what: &str, value: f64, limit: f64) -> Self {
        Check { what: what.into(), value, limit, at_least: false, pass: value <= limit }
    }

    pub fn above(what: &str, value: f64, limit: f64) -> Self {
        Check { what: what.into(), value, limit, at_least: true, pass: value >= limit }
    }

    pub fn holds(what: &str, ok: bool) -> Self {
        Check { what: what.into(), value: if ok { 1.0 } else { 0.0 }, limit: 1.0, at_least: true, pass: ok }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: String,
    pub pass: bool,
    pub checks: Vec<Check>,
    /// Module error that stopped the criterion, if any.
    pub error: Option<String>,
}

impl CriterionResult {
    fn new(id: usize, checks: Vec<Check>) -> Self {
        CriterionResult { id, name: NAMES[id - 1].into(), pass: checks.iter().all(|c| c.pass), checks, error: None }
    }

    fn failed(id: usize, e: crate::Error) -> Self {
        CriterionResult { id, name: NAMES[id - 1].into(), pass: false, checks: vec![], error: Some(e.to_string()) }
    }

    /// One summary line.
    pub fn line(&self) -> String {
        let worst = self.checks.iter().find(|c| !c.pass).or_else(|| self.checks.first());
        let detail = match (&self.error, worst) {
            (Some(e), _) => format!("error: {}", e),
            (None, Some(c)) if c.at_least => format!("{} = {:.3e} (>= {:.1e})", c.what, c.value, c.limit),
            (None, Some(c)) => format!("{} = {:.3e} (<= {:.1e})", c.what, c.value, c.limit),
            (None, None) => String::new(),
        };
        format!("[{}] {:>2} {:<28} {}", if self.pass { "PASS" } else { "FAIL" }, self.id, self.name, detail)
    }
}

pub const NAMES: [&str; 9] = [
    "jet algebra axioms",
    "model jet group",
    "holomorphic dimensions",
    "hodge round trips",
    "first variation",
    "displacement law",
    "decomposition",
    "harmonicization",
    "degree-3 hitchin map",
];

#[derive(Clone, Debug, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub resolution: usize,
    pub criteria: Vec<CriterionResult>,
    pub passed: bool,
}

/// Shared state of a run: the configuration and the lazily built surface.
pub struct Context {
    pub cfg: RunConfig,
    surface: Option<Surface>,
}

impl Context {
    pub fn new(cfg: RunConfig) -> Self {
        Context { cfg, surface: None }
    }

    pub fn surface(&mut self) -> Result<&Surface> {
        if self.surface.is_none() {
            self.surface = Some(build_bolza(self.cfg.resolution)?);
        }
        Ok(self.surface.as_ref().unwrap())
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.cfg.seed.wrapping_mul(0x9e37_79b9).wrapping_add(salt))
    }
}

/// Runs criterion `id` (1 to 9); module errors become a failed result.
pub fn run_criterion(ctx: &mut Context, id: usize) -> CriterionResult {
    let r = match id {
        1 => jet_axioms(ctx),
        2 => model_jets(ctx),
        3 => dimensions(ctx),
        4 => hodge_round_trips(ctx),
        5 => first_variation_checks(ctx),
        6 => displacement_law(ctx),
        7 => decomposition(ctx),
        8 => harmonicization(ctx),
        9 => hitchin(ctx),
        _ => return CriterionResult::failed(1.max(id.min(9)), crate::Error::Invalid(format!("no criterion {}", id))),
    };
    r.unwrap_or_else(|e| CriterionResult::failed(id, e))
}

/// All criteria in order.
pub fn selftest(cfg: &RunConfig) -> SelftestReport {
    let mut ctx = Context::new(cfg.clone());
    let criteria: Vec<CriterionResult> = (1..=9).map(|id| run_criterion(&mut ctx, id)).collect();
    let passed = criteria.iter().all(|c| c.pass);
    SelftestReport { seed: cfg.seed, resolution: cfg.resolution, criteria, passed }
}

fn rel_max(a: &JetField, scale: f64) -> f64 {
    a.max_abs() / scale.max(f64::MIN_POSITIVE)
}

fn jet_axioms(ctx: &mut Context) -> Result<CriterionResult> {
    let chart = Chart::new(12, 0.4);
    let (mut anti, mut jac, mut leib): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for seed in 0..100u64 {
        let mut rng = ctx.rng(1000 + seed);
        let cap = rng.gen_range(2..=5);
        let f = samples::chart_jet(&chart, cap, 2, &mut rng);
        let g = samples::chart_jet(&chart, cap, 2, &mut rng);
        let h = samples::chart_jet(&chart, cap, 2, &mut rng);
        let fg = poisson(&chart, &f, &g)?;
        let gf = poisson(&chart, &g, &f)?;
        anti = anti.max(rel_max(&fg.add(&gf)?, fg.max_abs()));
        let t1 = poisson(&chart, &f, &poisson(&chart, &g, &h)?)?;
        let t2 = poisson(&chart, &g, &poisson(&chart, &h, &f)?)?;
        let t3 = poisson(&chart, &h, &fg)?;
        let scale = t1.max_abs().max(t2.max_abs()).max(t3.max_abs());
        jac = jac.max(rel_max(&t1.add(&t2)?.add(&t3)?, scale));
        let lhs = poisson(&chart, &f, &g.mul(&h)?)?;
        let a = fg.mul(&h)?;
        let b = g.mul(&poisson(&chart, &f, &h)?)?;
        let scale = lhs.max_abs().max(a.max_abs()).max(b.max_abs());
        leib = leib.max(rel_max(&lhs.sub(&a)?.sub(&b)?, scale));
    }
    Ok(CriterionResult::new(
        1,
        vec![
            Check::below("antisymmetry", anti, 1e-10),
            Check::below("jacobi", jac, 1e-10),
            Check::below("leibniz", leib, 1e-10),
        ],
    ))
}

fn random_model(rng: &mut ChaCha8Rng, n: usize) -> Vec<Q> {
    (2..=n).map(|_| q(rng.gen_range(-9..=9), rng.gen_range(1..=7))).collect()
}

fn model_jets(ctx: &mut Context) -> Result<CriterionResult> {
    let mut rng = ctx.rng(2000);
    let (mut group, mut series, mut explog, mut bch_ok) = (true, true, true, true);
    for n in 2..=6 {
        let id = ModelJet::identity(n);
        for _ in 0..12 {
            let f = ModelJet::new(random_model(&mut rng, n));
            let g = ModelJet::new(random_model(&mut rng, n));
            let h = ModelJet::new(random_model(&mut rng, n));
            let assoc = mj_compose(&mj_compose(&f, &g)?, &h)? == mj_compose(&f, &mj_compose(&g, &h)?)?;
            let unit = mj_compose(&f, &id)? == f && mj_compose(&id, &f)? == f;
            let fi = mj_invert(&f);
            let inv = mj_compose(&f, &fi)?.is_identity() && mj_compose(&fi, &f)?.is_identity();
            group &= assoc && unit && inv;
            let v = VectorField::new(random_model(&mut rng, n));
            let w = VectorField::new(random_model(&mut rng, n));
            explog &= mj_log(&mj_exp(&v)) == v && mj_exp(&mj_log(&f)) == f;
            // the fourth-order series is the whole story up to n = 5
            if n <= 5 {
                bch_ok &= mj_compose(&mj_exp(&v), &mj_exp(&w))? == mj_exp(&bch(&w, &v));
            }
        }
        let rep = mj_central_series(n, ctx.cfg.seed);
        series &= rep.containment && rep.additive_quotients && rep.top_central;
    }
    Ok(CriterionResult::new(
        2,
        vec![
            Check::holds("group axioms", group),
            Check::holds("central series", series),
            Check::holds("exp/log inverse", explog),
            Check::holds("exp of bch", bch_ok),
        ],
    ))
}

fn dimensions(ctx: &mut Context) -> Result<CriterionResult> {
    let s = ctx.surface()?;
    let mut checks = vec![];
    let mut total = 0;
    for (k, want) in [(2usize, 3usize), (3, 5), (4, 7)] {
        let b = holomorphic_basis(s, k)?;
        total += 2 * b.dim();
        checks.push(Check::holds(&format!("dim H^0(K^{}) = {}", k, want), b.dim() == want));
        checks.push(Check::above(&format!("gap k={}", k), b.gap, 1e3));
    }
    checks.push(Check::holds("real dimension 30", total == 30));
    Ok(CriterionResult::new(3, checks))
}

fn hodge_round_trips(ctx: &mut Context) -> Result<CriterionResult> {
    let mut rng = ctx.rng(4000);
    let s = ctx.surface()?;
    let mut checks = vec![];
    for k in [3usize, 4] {
        let (mut res, mut orth): (f64, f64) = (0.0, 0.0);
        for _ in 0..50 {
            let mu = samples::beltrami_field(s, k, 1.0, &mut rng)?;
            let split = hodge_decompose(s, &mu, k, 1e-8)?;
            res = res.max(split.residual);
            orth = orth.max(split.orthogonality);
        }
        checks.push(Check::below(&format!("reconstruction k={}", k), res, 1e-8));
        checks.push(Check::below(&format!("orthogonality k={}", k), orth, 1e-8));
    }
    Ok(CriterionResult::new(4, checks))
}

fn first_variation_checks(ctx: &mut Context) -> Result<CriterionResult> {
    // central differences of the flow against the formula, on a chart with
    // a Hamiltonian that also moves μ₂
    let mut rng = ctx.rng(5000);
    let chart = Chart::new(12, 0.4);
    let st = samples::chart_structure(&chart, 4, 0.3, Normalization::Negative, &mut rng)?;
    let h = samples::chart_jet(&chart, 3, 2, &mut rng).scale(C::new(0.1, 0.0));
    let v = first_variation(&chart, &st, &h)?;
    let opts = FlowOptions { steps_per_unit: 16, stabilize: 1e-12, max_doublings: 4, ..FlowOptions::default() };
    let mut errs = vec![];
    for eps in [0.2, 0.1, 0.05] {
        let fwd = flow_integrate(&chart, &st, &HamiltonianJet::autonomous(h.scale(C::new(eps, 0.0))), &opts)?.final_state;
        let bwd = flow_integrate(&chart, &st, &HamiltonianJet::autonomous(h.scale(C::new(-eps, 0.0))), &opts)?.final_state;
        let mut e: f64 = 0.0;
        for (l, vl) in v.iter().enumerate() {
            for i in 0..vl.len() {
                let d = (fwd.mu[l].values[i] - bwd.mu[l].values[i]) / (2.0 * eps);
                e = e.max((d - vl.values[i]).norm());
            }
        }
        errs.push(e);
    }
    let order = (errs[0] / errs[1]).log2().min((errs[1] / errs[2]).log2());
    // Maaß form against the direct form on the surface, μ₂ = 0
    let mut rng = ctx.rng(5001);
    let s = ctx.surface()?;
    let st = samples::natural_structure(s, 4, 0.3, Normalization::Negative, &mut rng)?;
    let mut maass: f64 = 0.0;
    for k in 1..=3usize {
        let w = random_smooth_field(s, (-(k as i32), 0), &mut rng)?.scale(C::new(0.2, 0.0));
        let mut h = JetField::zero(3, s.n_copies());
        h.set_slice(k, 0, w.values);
        let a = first_variation(s, &st, &h)?;
        let b = first_variation_maass(s, &st, &h)?;
        for (x, y) in a.iter().zip(&b) {
            maass = maass.max(x.sub(y)?.max_abs());
        }
    }
    Ok(CriterionResult::new(
        5,
        vec![Check::above("central difference order", order, 1.9), Check::below("maass vs direct", maass, 1e-10)],
    ))
}

fn displacement_law(ctx: &mut Context) -> Result<CriterionResult> {
    let mut rng = ctx.rng(6000);
    let s = ctx.surface()?;
    let n = 4;
    let opts = HarmonicOptions::default().flow;
    let (mut top, mut low): (f64, f64) = (0.0, 0.0);
    for norm in [Normalization::Negative, Normalization::Positive] {
        let st = samples::natural_structure(s, n, 0.3, norm, &mut rng)?;
        let sigma = norm.pbar_sign();
        for k in 2..n {
            let (w, h) = samples::homogeneous_real(s, k, n - 1, 0.2, &mut rng)?;
            let out = flow_integrate(s, &st, &HamiltonianJet::autonomous(h), &opts)?.final_state;
            let dw = dbar_op(s, &w)?.scale(C::new(sigma, 0.0));
            let want = y_space(s, k + 1)?.project(&st.mu(k + 1).add(&dw)?.values);
            let got = &out.mu(k + 1).values;
            top = top.max(got.iter().zip(&want).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max));
            for l in 2..=k {
                low = low.max(out.mu(l).sub(st.mu(l))?.max_abs());
            }
        }
    }
    Ok(CriterionResult::new(
        6,
        vec![Check::below("mu_{k+1} displacement", top, 1e-7), Check::below("lower coefficients", low, 1e-9)],
    ))
}

fn two_stationary_chart(chart: &Chart, cap: usize, rng: &mut ChaCha8Rng) -> HamiltonianJet {
    let pieces = (0..3)
        .map(|_| {
            let h = samples::chart_jet(chart, cap, 2, rng);
            let h = h.sub(&h.below(2)).expect("same layout").scale(C::new(0.05, 0.0));
            (rng.gen_range(0.3..0.8), h)
        })
        .collect();
    HamiltonianJet { pieces }
}

fn decomposition(ctx: &mut Context) -> Result<CriterionResult> {
    let mut rng = ctx.rng(7000);
    let chart = Chart::new(12, 0.4);
    let n = 5;
    let tests = (0..5)
        .map(|_| samples::chart_structure(&chart, n, 0.3, Normalization::Negative, &mut rng))
        .collect::<Result<Vec<_>>>()?;
    let mut action: f64 = 0.0;
    for _ in 0..3 {
        let h = two_stationary_chart(&chart, n - 1, &mut rng);
        let d = decompose_inductive(&chart, &h, &tests, 1e-6)?;
        action = action.max(action_mismatch(&chart, &h, &recomposed(&d.parts), &tests)?);
    }
    // a homogeneous Hamiltonian is its own decomposition
    let mut homog: f64 = 0.0;
    for k in 2..n {
        let h = samples::chart_jet(&chart, n - 1, 2, &mut rng).homogeneous(k).scale(C::new(0.05, 0.0));
        let d = decompose_inductive(&chart, &HamiltonianJet::autonomous(h.clone()), &[], 1e-6)?;
        for (i, p) in d.parts.iter().enumerate() {
            let e = if i + 2 == k { p.sub(&h)?.max_abs() } else { p.max_abs() };
            homog = homog.max(e);
        }
    }
    Ok(CriterionResult::new(
        7,
        vec![Check::below("recomposed action", action, 1e-6), Check::below("homogeneous round trip", homog, 0.0)],
    ))
}

fn relative(a: &HigherStructure, b: &HigherStructure) -> f64 {
    let scale = b.mu.iter().map(|m| m.max_abs()).fold(0.0, f64::max);
    a.distance(b) / scale.max(f64::MIN_POSITIVE)
}

fn harmonicization(ctx: &mut Context) -> Result<CriterionResult> {
    let mut rng = ctx.rng(8000);
    let (amp, pert, samples_n, seed) = (ctx.cfg.amplitude, ctx.cfg.perturbation, ctx.cfg.samples, ctx.cfg.seed);
    let s = ctx.surface()?;
    let n = 4;
    let opts = HarmonicOptions::default();
    let st = samples::natural_structure(s, n, amp, Normalization::Negative, &mut rng)?;
    let (rep, _) = harmonic_representative(s, &st, &opts)?;
    let (again, _) = harmonic_representative(s, &rep.structure, &opts)?;
    let idem = again.structure.distance(&rep.structure);
    let base: Vec<f64> = (3..=n).map(|k| energy(s, &rep.structure, k)).collect::<Result<_>>()?;
    let (mut orbit, mut excess): (f64, f64) = (0.0, f64::NEG_INFINITY);
    for i in 0..samples_n as u64 {
        let p = orbit_perturb(s, &rep.structure, seed.wrapping_add(100 + i), pert)?;
        for (j, k) in (3..=n).enumerate() {
            // how far the representative's energy sits above the sample's
            excess = excess.max((base[j] - energy(s, &p, k)?) / base[j]);
        }
        let (hp, _) = harmonic_representative(s, &p, &opts)?;
        orbit = orbit.max(relative(&hp.structure, &rep.structure));
    }
    let sigma = Isometry::rotation();
    let a = harmonic_representative(s, &isometry_act(s, sigma, &st)?, &opts)?.0.structure;
    let b = isometry_act(s, sigma, &rep.structure)?;
    let equiv = relative(&a, &b);
    Ok(CriterionResult::new(
        8,
        vec![
            Check::below("idempotence", idem, 1e-8),
            Check::below("orbit invariance", orbit, 1e-5),
            Check::below("energy excess at representative", excess, 1e-12),
            Check::below("rotation equivariance", equiv, 1e-5),
        ],
    ))
}

fn rel_traces(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs() / x.abs().max(y.abs()).max(1.0)).fold(0.0, f64::max)
}

fn hitchin(ctx: &mut Context) -> Result<CriterionResult> {
    let mut rng = ctx.rng(9000);
    let (amp, pert, seed) = (ctx.cfg.amplitude, ctx.cfg.perturbation, ctx.cfg.seed);
    let s = ctx.surface()?;
    let opts = HitchinOptions::default();
    let zero = HigherStructure::zero(3, Normalization::Negative, s.n_copies());
    let z = hitchin_map(s, &zero, &opts)?;
    let sig = z.fuchsian.form.signature;
    let mut checks = vec![
        Check::below("form residual (phi = 0)", z.fuchsian.form.residual, 1e-6),
        Check::holds("form signature (2,1)", sig == (2, 1) || sig == (1, 2)),
        Check::below("eigenvalues {l,1,1/l}", z.fuchsian.eigen_error, 1e-6),
        Check::below("relation defect (phi = 0)", z.holonomy.relation_defect, 1e-5),
        Check::below("det defect (phi = 0)", z.holonomy.det_error, 1e-8),
    ];
    let st = samples::natural_structure(s, 3, amp, Normalization::Negative, &mut rng)?;
    let base = hitchin_map(s, &st, &opts)?;
    let mut worst: f64 = 0.0;
    for i in 0..3u64 {
        let p = orbit_perturb(s, &st, seed.wrapping_add(200 + i), pert)?;
        worst = worst.max(rel_traces(&hitchin_map(s, &p, &opts)?.traces, &base.traces));
    }
    checks.push(Check::below("orbit-perturbed traces", worst, 1e-4));
    checks.push(Check::below("det defect (phi != 0)", base.holonomy.det_error, 1e-8));
    Ok(CriterionResult::new(9, checks))
}
