//! Runge–Kutta integration of Hamiltonian flows on the coefficient fields.

use super::variation::first_variation;
use super::FlowSpace;
use crate::error::{Error, Result};
use crate::jets::{HigherStructure, JetField};
use crate::tensor::TensorField;
use num_complex::Complex64 as C;
use serde::Serialize;

/// Piecewise-constant-in-time Hamiltonian: each piece `(duration, H)` is
/// flowed autonomously, in order.
#[derive(Clone, Debug, PartialEq, Serialize, serde::Deserialize)]
pub struct HamiltonianJet {
    pub pieces: Vec<(f64, JetField)>,
}

impl HamiltonianJet {
    pub fn autonomous(h: JetField) -> Self {
        HamiltonianJet { pieces: vec![(1.0, h)] }
    }

    pub fn duration(&self) -> f64 {
        self.pieces.iter().map(|p| p.0).sum()
    }

    /// Every piece equals its conjugate.
    pub fn is_real(&self, tol: f64) -> bool {
        self.pieces.iter().all(|(_, h)| h.is_real(tol))
    }

    /// Lowest degree present in any piece (`usize::MAX` if all vanish).
    pub fn order(&self) -> usize {
        self.pieces.iter().map(|(_, h)| h.order()).min().unwrap_or(usize::MAX)
    }

    /// The same flow run backwards: reversed pieces with negated Hamiltonians.
    pub fn reversed(&self) -> Self {
        HamiltonianJet { pieces: self.pieces.iter().rev().map(|(d, h)| (*d, h.scale(C::new(-1.0, 0.0)))).collect() }
    }

    pub fn scaled(&self, s: f64) -> Self {
        HamiltonianJet { pieces: self.pieces.iter().map(|(d, h)| (*d, h.scale(C::new(s, 0.0)))).collect() }
    }
}

/// Integration controls.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct FlowOptions {
    /// Runge–Kutta steps per unit time before any doubling.
    pub steps_per_unit: usize,
    /// Stop doubling once successive final states differ by at most this.
    pub stabilize: f64,
    pub max_doublings: usize,
    /// Abort when `sup |μ₂|` reaches `1 - margin`.
    pub beltrami_margin: f64,
    /// Keep a sample every this many steps in the record.
    pub sample_every: usize,
}

impl Default for FlowOptions {
    fn default() -> Self {
        FlowOptions { steps_per_unit: 64, stabilize: 1e-8, max_doublings: 6, beltrami_margin: 1e-3, sample_every: 1 }
    }
}

/// One trajectory sample.
#[derive(Clone, Debug, Serialize)]
pub struct FlowSample {
    pub t: f64,
    /// `max |μ_k|` for `k = 2..n`.
    pub mu_max: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FlowRecord {
    pub initial: HigherStructure,
    pub final_state: HigherStructure,
    pub hamiltonian: HamiltonianJet,
    /// Total Runge–Kutta steps of the accepted run.
    pub steps: usize,
    pub doublings: usize,
    /// Difference between the last two runs of the doubling sequence.
    pub stabilization: f64,
    pub samples: Vec<FlowSample>,
}

type State = Vec<Vec<C>>;

fn to_structure(s0: &HigherStructure, y: &State) -> HigherStructure {
    HigherStructure {
        degree: s0.degree,
        normalization: s0.normalization,
        mu: y.iter().enumerate().map(|(i, v)| TensorField::new((-1 - i as i32, 1), v.clone())).collect(),
    }
}

fn rhs<D: FlowSpace + ?Sized>(dom: &D, s0: &HigherStructure, y: &State, h: &JetField) -> Result<State> {
    let st = to_structure(s0, y);
    Ok(first_variation(dom, &st, h)?.into_iter().map(|t| t.values).collect())
}

fn lin(y: &State, a: f64, k: &State) -> State {
    y.iter().zip(k).map(|(u, v)| u.iter().zip(v).map(|(x, z)| x + z * a).collect()).collect()
}

fn sup(v: &[C]) -> f64 {
    v.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

fn run<D: FlowSpace + ?Sized>(
    dom: &D,
    s0: &HigherStructure,
    h: &HamiltonianJet,
    per_unit: usize,
    opts: &FlowOptions,
) -> Result<(State, usize, Vec<FlowSample>)> {
    let mut y: State = s0.mu.iter().map(|m| m.values.clone()).collect();
    let mut t = 0.0;
    let mut total = 0;
    let mut samples = vec![FlowSample { t, mu_max: y.iter().map(|v| sup(v)).collect() }];
    let mut history = vec![sup(&y[0])];
    for (dur, ham) in &h.pieces {
        if *dur <= 0.0 {
            continue;
        }
        let steps = ((dur * per_unit as f64).ceil() as usize).max(1);
        let dt = dur / steps as f64;
        for _ in 0..steps {
            let k1 = rhs(dom, s0, &y, ham)?;
            let k2 = rhs(dom, s0, &lin(&y, dt / 2.0, &k1), ham)?;
            let k3 = rhs(dom, s0, &lin(&y, dt / 2.0, &k2), ham)?;
            let k4 = rhs(dom, s0, &lin(&y, dt, &k3), ham)?;
            for (l, v) in y.iter_mut().enumerate() {
                for (i, x) in v.iter_mut().enumerate() {
                    *x += (k1[l][i] + (k2[l][i] + k3[l][i]) * 2.0 + k4[l][i]) * (dt / 6.0);
                }
            }
            // keep the trajectory in the discrete space of k-Beltrami
            // differentials
            for (l, v) in y.iter_mut().enumerate() {
                *v = dom.project(l + 2, std::mem::take(v))?;
            }
            t += dt;
            total += 1;
            let m2 = sup(&y[0]);
            history.push(m2);
            if !(m2 < 1.0 - opts.beltrami_margin) {
                return Err(Error::Divergence { what: "flow left the Beltrami range".into(), history });
            }
            if total % opts.sample_every.max(1) == 0 {
                samples.push(FlowSample { t, mu_max: y.iter().map(|v| sup(v)).collect() });
            }
        }
    }
    Ok((y, total, samples))
}

/// Flows `s` along `h` with classical RK4, doubling the step count until
/// the final state stabilizes.
pub fn flow_integrate<D: FlowSpace + ?Sized>(
    dom: &D,
    s: &HigherStructure,
    h: &HamiltonianJet,
    opts: &FlowOptions,
) -> Result<FlowRecord> {
    s.check_beltrami()?;
    if opts.steps_per_unit == 0 {
        return Err(Error::Invalid("steps per unit must be at least 1".into()));
    }
    for (_, p) in &h.pieces {
        if p.len() != s.len() {
            return Err(Error::Mismatch("Hamiltonian and structure sampled differently".into()));
        }
        if p.order() == 1 && !dom.supports_degree_one() {
            return Err(Error::Invalid("degree-1 Hamiltonians move the base; use a chart".into()));
        }
    }
    let mut per = opts.steps_per_unit;
    let (mut y, mut steps, mut samples) = run(dom, s, h, per, opts)?;
    let mut doublings = 0;
    let mut stab = 0.0;
    while doublings < opts.max_doublings {
        per *= 2;
        let (y2, st2, sm2) = run(dom, s, h, per, opts)?;
        stab = y.iter().zip(&y2).map(|(a, b)| a.iter().zip(b).map(|(x, z)| (x - z).norm()).fold(0.0, f64::max)).fold(0.0, f64::max);
        y = y2;
        steps = st2;
        samples = sm2;
        doublings += 1;
        if stab <= opts.stabilize {
            break;
        }
    }
    if opts.max_doublings > 0 && stab > opts.stabilize {
        return Err(Error::Divergence { what: "step doubling".into(), history: vec![stab] });
    }
    Ok(FlowRecord {
        initial: s.clone(),
        final_state: to_structure(s, &y),
        hamiltonian: h.clone(),
        steps,
        doublings,
        stabilization: stab,
        samples,
    })
}

/// Final state only, with default options.
pub fn flow<D: FlowSpace + ?Sized>(dom: &D, s: &HigherStructure, h: &HamiltonianJet) -> Result<HigherStructure> {
    Ok(flow_integrate(dom, s, h, &FlowOptions::default())?.final_state)
}
