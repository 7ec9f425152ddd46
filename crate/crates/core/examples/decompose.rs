//! Writes a time-dependent Hamiltonian flow as a composition of flows of
//! homogeneous Hamiltonians, lowest degree first, and compares the actions.

use highercx::flows::decompose::{action_mismatch, recomposed};
use highercx::flows::{decompose_inductive, HamiltonianJet};
use highercx::jets::{Chart, Normalization};
use highercx::samples::{chart_jet, chart_structure};
use highercx::{Complex64 as C, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> Result<()> {
    let chart = Chart::new(12, 0.4);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let n = 5;
    let pieces = (0..3)
        .map(|_| {
            let h = chart_jet(&chart, n - 1, 2, &mut rng);
            let h = h.sub(&h.below(2))?.scale(C::new(0.05, 0.0));
            Ok((rng.gen_range(0.3..0.8), h))
        })
        .collect::<Result<Vec<_>>>()?;
    let h = HamiltonianJet { pieces };
    let tests = (0..3)
        .map(|_| chart_structure(&chart, n, 0.3, Normalization::Negative, &mut rng))
        .collect::<Result<Vec<_>>>()?;
    let d = decompose_inductive(&chart, &h, &tests, 1e-6)?;
    for (i, p) in d.parts.iter().enumerate() {
        println!("degree {} part: max {:.3e}", i + 2, p.max_abs());
    }
    println!("action mismatch on test structures {:.2e}", action_mismatch(&chart, &h, &recomposed(&d.parts), &tests)?);
    Ok(())
}
