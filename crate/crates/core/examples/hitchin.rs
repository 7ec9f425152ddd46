//! Degree-3 structures to `SL(3, ℝ)` holonomy through the affine sphere:
//! the zero differential lands on the Fuchsian locus, a nonzero one leaves
//! it.

use highercx::affine_sphere::{hitchin_map, HitchinOptions};
use highercx::jets::{HigherStructure, Normalization};
use highercx::samples::natural_structure;
use highercx::surface::build_bolza;
use highercx::Result;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<()> {
    let s = build_bolza(14)?;
    let opts = HitchinOptions::default();
    let zero = HigherStructure::zero(3, Normalization::Negative, s.n_copies());
    let st = natural_structure(&s, 3, 0.3, Normalization::Negative, &mut ChaCha8Rng::seed_from_u64(9))?;
    for (name, x) in [("zero", &zero), ("random", &st)] {
        let r = hitchin_map(&s, x, &opts)?;
        println!("{}: Fuchsian {}, form residual {:.1e}, Wang iterations {}", name, r.fuchsian.fuchsian, r.fuchsian.form.residual, r.metric.iterations);
        println!("    generator traces {:?}", r.traces[..4].iter().map(|t| format!("{:.6}", t)).collect::<Vec<_>>());
        println!("    det {:.1e}, relation {:.1e}", r.holonomy.det_error, r.holonomy.relation_defect);
    }
    Ok(())
}
