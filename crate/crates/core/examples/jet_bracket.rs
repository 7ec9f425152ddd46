//! Poisson bracket of jet fields on a Chebyshev chart: antisymmetry, the
//! Jacobi identity and the derivation rule, measured on random polynomial
//! jets of each truncation.

use highercx::jets::{poisson, Chart};
use highercx::samples::chart_jet;
use highercx::Result;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<()> {
    let chart = Chart::new(12, 0.4);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    println!("cap  antisymmetry  jacobi     leibniz");
    for cap in 2..=5 {
        let f = chart_jet(&chart, cap, 2, &mut rng);
        let g = chart_jet(&chart, cap, 2, &mut rng);
        let h = chart_jet(&chart, cap, 2, &mut rng);
        let fg = poisson(&chart, &f, &g)?;
        let anti = fg.add(&poisson(&chart, &g, &f)?)?.max_abs();
        let jac = poisson(&chart, &f, &poisson(&chart, &g, &h)?)?
            .add(&poisson(&chart, &g, &poisson(&chart, &h, &f)?)?)?
            .add(&poisson(&chart, &h, &fg)?)?
            .max_abs();
        let leib = poisson(&chart, &f, &g.mul(&h)?)?
            .sub(&fg.mul(&h)?)?
            .sub(&g.mul(&poisson(&chart, &f, &h)?)?)?
            .max_abs();
        println!("{:<4} {:<13.2e} {:<10.2e} {:.2e}", cap, anti, jac, leib);
    }
    Ok(())
}
