//! Splits a k-Beltrami differential into its harmonic part and `∂̄w`.

use highercx::hodge::hodge_decompose;
use highercx::samples::beltrami_field;
use highercx::surface::{build_bolza, petersson_pairing};
use highercx::Result;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<()> {
    let s = build_bolza(14)?;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for k in [3, 4] {
        let mu = beltrami_field(&s, k, 1.0, &mut rng)?;
        let h = hodge_decompose(&s, &mu, k, 1e-8)?;
        let total = petersson_pairing(&s, &mu, &mu, k)?.re;
        let harm = petersson_pairing(&s, &h.harmonic, &h.harmonic, k)?.re;
        println!(
            "k = {}: harmonic share {:.4}, residual {:.1e}, orthogonality {:.1e}, |w| max {:.3}",
            k,
            harm / total,
            h.residual,
            h.orthogonality,
            h.potential.max_abs()
        );
    }
    Ok(())
}
