//! Flowing by `w p^k + conj(w) p̄^k` moves only `μ_{k+1}`, by `±∂̄w`.

use highercx::flows::{flow_integrate, HamiltonianJet};
use highercx::harmonicize::HarmonicOptions;
use highercx::hodge::y_space;
use highercx::jets::Normalization;
use highercx::samples::{homogeneous_real, natural_structure};
use highercx::surface::{build_bolza, dbar_op};
use highercx::{Complex64 as C, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<()> {
    let s = build_bolza(14)?;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let n = 4;
    let st = natural_structure(&s, n, 0.3, Normalization::Negative, &mut rng)?;
    let opts = HarmonicOptions::default().flow;
    for k in 2..n {
        let (w, h) = homogeneous_real(&s, k, n - 1, 0.2, &mut rng)?;
        let rec = flow_integrate(&s, &st, &HamiltonianJet::autonomous(h), &opts)?;
        let dw = dbar_op(&s, &w)?.scale(C::new(st.normalization.pbar_sign(), 0.0));
        let want = y_space(&s, k + 1)?.project(&st.mu(k + 1).add(&dw)?.values);
        let err = rec.final_state.mu(k + 1).values.iter().zip(&want).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        println!("k = {}: {} steps, mu_{} off by {:.1e}", k, rec.steps, k + 1, err);
        for l in 2..=n {
            println!("    |mu_{}| {:.4} -> {:.4}", l, st.mu(l).max_abs(), rec.final_state.mu(l).max_abs());
        }
    }
    Ok(())
}
