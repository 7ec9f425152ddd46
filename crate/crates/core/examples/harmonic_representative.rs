//! Moves a structure along its orbit until `μ_3, …, μ_n` are harmonic, then
//! checks that perturbed points of the same orbit land on the same place.

use highercx::harmonicize::{energy, harmonic_representative, orbit_perturb, HarmonicOptions};
use highercx::jets::Normalization;
use highercx::samples::natural_structure;
use highercx::surface::build_bolza;
use highercx::Result;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<()> {
    let s = build_bolza(14)?;
    let st = natural_structure(&s, 4, 0.3, Normalization::Negative, &mut ChaCha8Rng::seed_from_u64(8))?;
    let opts = HarmonicOptions::default();
    let (rep, report) = harmonic_representative(&s, &st, &opts)?;
    println!("passes {}, residuals {:?} -> {:?}", report.passes, report.residual_pre, report.residual_post);
    println!("energies {:?} -> {:?}", report.energy_pre, report.energy_post);
    for seed in 0..3 {
        let p = orbit_perturb(&s, &rep.structure, seed, 0.1)?;
        let (back, _) = harmonic_representative(&s, &p, &opts)?;
        println!(
            "perturbation {}: moved {:.3e}, energy {:.5} -> {:.5}, back within {:.1e}",
            seed,
            p.distance(&rep.structure),
            energy(&s, &p, 3)?,
            energy(&s, &back.structure, 3)?,
            back.structure.distance(&rep.structure)
        );
    }
    Ok(())
}
