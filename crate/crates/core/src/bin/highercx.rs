use clap::{Parser, Subcommand};
use highercx::affine_sphere::{hitchin_map, HitchinOptions};
use highercx::config::RunConfig;
use highercx::flows::decompose::{action_mismatch, recomposed, total_generator};
use highercx::flows::{decompose_inductive, flow_integrate, FlowOptions, HamiltonianJet};
use highercx::harmonicize::{harmonic_representative, random_two_stationary, HarmonicOptions};
use highercx::hodge::hodge_decompose;
use highercx::jets::{HigherStructure, Normalization};
use highercx::report::{read_json, write_json, Table};
use highercx::surface::{build_bolza, holomorphic_basis, MeshFile, Surface};
use highercx::{samples, selftest, Error, Result, TensorField};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "highercx", about = "Higher complex structures on the Bolza surface")]
struct Cli {
    /// Key-value configuration file (needs `schema_version = 1`).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Spectral element order of the surface.
    #[arg(long, global = true)]
    resolution: Option<usize>,
    /// Structure degree n.
    #[arg(long, global = true)]
    degree: Option<usize>,
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build the surface and write the mesh file.
    Mesh,
    /// Holomorphic k-differentials: dimension and spectral gap.
    Basis { k: usize },
    /// Hodge decomposition of a k-Beltrami differential (k = degree).
    Hodge,
    /// Harmonic representative of a natural-coordinate structure.
    Harmonize,
    /// Integrate a Hamiltonian flow.
    Flow,
    /// Inductive coordinates of a 2-stationary flow.
    Decompose,
    /// Degree-3 Hitchin holonomy.
    Holonomy {
        /// Use the structure with zero cubic part.
        #[arg(long)]
        zero: bool,
    },
    /// Run the acceptance criteria.
    Selftest,
}

fn load_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::from_file(p)?,
        None => RunConfig::default(),
    };
    if let Some(v) = cli.seed {
        cfg.seed = v;
    }
    if let Some(v) = cli.resolution {
        cfg.resolution = v;
    }
    if let Some(v) = cli.degree {
        cfg.degree = v;
    }
    if let Some(v) = cli.tol {
        cfg.tol = v;
    }
    if let Some(v) = &cli.out {
        cfg.out = v.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn rng(cfg: &RunConfig) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed)
}

/// The configured input structure, or a seeded random one of degree `n`.
fn structure(cfg: &RunConfig, s: &Surface, n: usize) -> Result<HigherStructure> {
    match &cfg.input {
        Some(p) => {
            let st: HigherStructure = read_json(p)?;
            if st.len() != s.n_copies() {
                return Err(Error::Mismatch(format!("{} holds {} samples, surface has {}", p.display(), st.len(), s.n_copies())));
            }
            Ok(st)
        }
        None => samples::natural_structure(s, n, cfg.amplitude, cfg.normalization, &mut rng(cfg)),
    }
}

fn emit<T: Serialize>(cfg: &RunConfig, name: &str, result: &T) -> Result<()> {
    let p = write_json(&cfg.out, name, name, cfg, result)?;
    println!("report: {}", p.display());
    Ok(())
}

#[derive(Serialize)]
struct BasisSummary {
    k: usize,
    dim: usize,
    expected: usize,
    gap: f64,
    smallest: Vec<f64>,
}

#[derive(Serialize)]
struct HodgeSummary {
    k: usize,
    residual: f64,
    orthogonality: f64,
    defect: f64,
    harmonic_max: f64,
    potential_max: f64,
}

#[derive(Serialize)]
struct HarmonizeSummary<'a> {
    report: &'a highercx::harmonicize::HarmonicReport,
    residuals: &'a [f64],
    displacement_below_tol: bool,
}

#[derive(Serialize)]
struct FlowSummary {
    degree: usize,
    pieces: usize,
    duration: f64,
    steps: usize,
    doublings: usize,
    stabilization: f64,
    csv_rows: usize,
    initial_max: Vec<f64>,
    final_max: Vec<f64>,
}

#[derive(Serialize)]
struct DecomposeSummary {
    degree: usize,
    part_norms: Vec<f64>,
    stationarity: Vec<f64>,
    action_error: f64,
    exponential_norm: f64,
    exponential_action_error: f64,
}

#[derive(Serialize)]
struct HolonomySummary<'a> {
    fuchsian: &'static str,
    report: &'a highercx::affine_sphere::HitchinReport,
}

fn maxes(st: &HigherStructure) -> Vec<f64> {
    st.mu.iter().map(|m| m.max_abs()).collect()
}

fn run(cli: &Cli) -> Result<i32> {
    let cfg = load_config(cli)?;
    if let Cmd::Selftest = cli.cmd {
        let rep = selftest::selftest(&cfg);
        for c in &rep.criteria {
            println!("{}", c.line());
        }
        emit(&cfg, "selftest", &rep)?;
        if !rep.passed {
            let failed: Vec<usize> = rep.criteria.iter().filter(|c| !c.pass).map(|c| c.id).collect();
            return Err(Error::Residual { what: format!("selftest criteria {:?}", failed), value: failed.len() as f64, tol: 0.0 });
        }
        return Ok(0);
    }
    let s = build_bolza(cfg.resolution)?;
    match &cli.cmd {
        Cmd::Mesh => {
            let m = MeshFile::new(&s);
            std::fs::create_dir_all(&cfg.out)?;
            let p = cfg.out.join("mesh.json");
            std::fs::write(&p, serde_json::to_string(&m)? + "\n")?;
            println!("mesh: {} nodes, {} triangles, area {:.12}", m.vertices.len(), m.triangles.len(), m.area);
            println!("mesh file: {}", p.display());
        }
        Cmd::Basis { k } => {
            let b = holomorphic_basis(&s, *k)?;
            let expected = 2 * k - 1;
            println!("k = {}: dimension {} (expected {}), gap {:.3e}", k, b.dim(), expected, b.gap);
            let mut t = Table::new(&["index", "singular_value"]);
            for (i, v) in b.smallest.iter().enumerate() {
                t.push(vec![i as f64, *v]);
            }
            t.write(&cfg.out, "basis")?;
            emit(&cfg, "basis", &BasisSummary { k: *k, dim: b.dim(), expected, gap: b.gap, smallest: b.smallest.clone() })?;
        }
        Cmd::Hodge => {
            let mu = match &cfg.input {
                Some(p) => read_json::<TensorField>(p)?,
                None => samples::beltrami_field(&s, cfg.degree, 1.0, &mut rng(&cfg))?,
            };
            let k = (1 - mu.ty.0) as usize;
            let split = hodge_decompose(&s, &mu, k, cfg.tol)?;
            println!("k = {}: residual {:.3e}, orthogonality {:.3e}", k, split.residual, split.orthogonality);
            std::fs::create_dir_all(&cfg.out)?;
            std::fs::write(cfg.out.join("hodge_harmonic.json"), serde_json::to_string(&split.harmonic)? + "\n")?;
            std::fs::write(cfg.out.join("hodge_potential.json"), serde_json::to_string(&split.potential)? + "\n")?;
            let sum = HodgeSummary {
                k,
                residual: split.residual,
                orthogonality: split.orthogonality,
                defect: split.defect,
                harmonic_max: split.harmonic.max_abs(),
                potential_max: split.potential.max_abs(),
            };
            emit(&cfg, "hodge", &sum)?;
        }
        Cmd::Harmonize => {
            let st = structure(&cfg, &s, cfg.degree)?;
            let opts = HarmonicOptions { tol: cfg.tol, ..HarmonicOptions::default() };
            let (h, rep) = harmonic_representative(&s, &st, &opts)?;
            let below = rep.displacement < cfg.tol;
            println!("passes {}, displacement {:.3e} ({} tol)", rep.passes, rep.displacement, if below { "<" } else { ">=" });
            let mut t = Table::new(&["k", "residual_pre", "residual_post", "energy_pre", "energy_post"]);
            for (i, k) in (3..=rep.degree).enumerate() {
                t.push(vec![k as f64, rep.residual_pre[i], rep.residual_post[i], rep.energy_pre[i], rep.energy_post[i]]);
            }
            t.write(&cfg.out, "harmonize")?;
            std::fs::write(cfg.out.join("representative.json"), serde_json::to_string(&h.structure)? + "\n")?;
            emit(&cfg, "harmonize", &HarmonizeSummary { report: &rep, residuals: &h.residuals, displacement_below_tol: below })?;
        }
        Cmd::Flow => {
            let st = structure(&cfg, &s, cfg.degree)?;
            let h = hamiltonian(&cfg, &s, st.degree)?;
            let opts = FlowOptions { steps_per_unit: cfg.steps_per_unit, stabilize: cfg.tol, ..FlowOptions::default() };
            let rec = flow_integrate(&s, &st, &h, &opts)?;
            let mut header = vec!["step".to_string(), "t".to_string()];
            header.extend((2..=st.degree).map(|k| format!("mu{}_max", k)));
            let mut t = Table { header, rows: vec![] };
            // one row per accepted step; the initial sample is in the JSON
            for (i, smp) in rec.samples.iter().skip(1).enumerate() {
                let mut row = vec![(i + 1) as f64, smp.t];
                row.extend(&smp.mu_max);
                t.push(row);
            }
            t.write(&cfg.out, "flow")?;
            std::fs::write(cfg.out.join("flow_final.json"), serde_json::to_string(&rec.final_state)? + "\n")?;
            println!("steps {}, doublings {}, stabilization {:.3e}", rec.steps, rec.doublings, rec.stabilization);
            let sum = FlowSummary {
                degree: st.degree,
                pieces: h.pieces.len(),
                duration: h.duration(),
                steps: rec.steps,
                doublings: rec.doublings,
                stabilization: rec.stabilization,
                csv_rows: t.rows.len(),
                initial_max: maxes(&st),
                final_max: maxes(&rec.final_state),
            };
            emit(&cfg, "flow", &sum)?;
        }
        Cmd::Decompose => {
            let n = cfg.degree;
            let h = hamiltonian(&cfg, &s, n)?;
            let mut r = rng(&cfg);
            let tests = (0..2)
                .map(|_| samples::natural_structure(&s, n, cfg.amplitude, Normalization::Negative, &mut r))
                .collect::<Result<Vec<_>>>()?;
            // the coordinates are exact jet algebra; how well the flows they
            // generate agree on the mesh is measured and reported separately
            let mut d = decompose_inductive(&s, &h, &[], cfg.tol.max(1e-6))?;
            d.action_error = action_mismatch(&s, &h, &recomposed(&d.parts), &tests)?;
            let g = total_generator(&s, &recomposed(&d.parts))?;
            let e = action_mismatch(&s, &HamiltonianJet::autonomous(g.clone()), &h, &tests)?;
            println!("parts {}, action error {:.3e}", d.parts.len(), d.action_error);
            std::fs::create_dir_all(&cfg.out)?;
            std::fs::write(cfg.out.join("decomposition.json"), serde_json::to_string(&recomposed(&d.parts))? + "\n")?;
            let sum = DecomposeSummary {
                degree: n,
                part_norms: d.parts.iter().map(|p| p.max_abs()).collect(),
                stationarity: d.stationarity.clone(),
                action_error: d.action_error,
                exponential_norm: g.max_abs(),
                exponential_action_error: e,
            };
            emit(&cfg, "decompose", &sum)?;
        }
        Cmd::Holonomy { zero } => {
            let st = if *zero { HigherStructure::zero(3, cfg.normalization, s.n_copies()) } else { structure(&cfg, &s, 3)? };
            let rep = hitchin_map(&s, &st, &HitchinOptions::default())?;
            let label = if rep.fuchsian.fuchsian { "yes" } else { "no" };
            println!("Fuchsian: {}", label);
            println!("relation defect {:.3e}, det defect {:.3e}", rep.holonomy.relation_defect, rep.holonomy.det_error);
            let mut t = Table::new(&["index", "trace"]);
            for (i, v) in rep.traces.iter().enumerate() {
                t.push(vec![i as f64, *v]);
            }
            t.write(&cfg.out, "traces")?;
            emit(&cfg, "holonomy", &HolonomySummary { fuchsian: label, report: &rep })?;
        }
        Cmd::Selftest => unreachable!(),
    }
    Ok(0)
}

/// The configured Hamiltonian, or a seeded real 2-stationary one.
fn hamiltonian(cfg: &RunConfig, s: &Surface, n: usize) -> Result<HamiltonianJet> {
    match &cfg.hamiltonian {
        Some(p) => read_json(p),
        None => random_two_stationary(s, n, 2, cfg.perturbation, cfg.seed),
    }
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    error: ErrorBody<'a>,
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    kind: &'a str,
    message: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            let body = ErrorReport { error: ErrorBody { kind: e.kind(), message: e.to_string() } };
            println!("{}", serde_json::to_string(&body).unwrap_or_default());
            ExitCode::from(if matches!(e, Error::Config(_)) { 2 } else { 1 })
        }
    }
}
