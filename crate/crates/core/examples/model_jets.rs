//! Exact arithmetic in the group of model jets `x + a₂x² + … + aₙxⁿ`:
//! composition, inverses, exponentials of vector fields and the lower
//! central series.

use highercx::bch::bch;
use highercx::modeljet::{mj_central_series, mj_commutator, mj_compose, mj_exp, mj_invert, mj_log, q, ModelJet, VectorField};
use highercx::Result;

fn show(f: &ModelJet) -> String {
    let c: Vec<String> = f.coeffs().iter().map(|c| c.to_string()).collect();
    format!("[{}]", c.join(", "))
}

fn main() -> Result<()> {
    let f = ModelJet::new(vec![q(1, 1), q(0, 1), q(-1, 3)]);
    let g = ModelJet::new(vec![q(0, 1), q(2, 1), q(1, 2)]);
    println!("f         = {}", show(&f));
    println!("f^-1      = {}", show(&mj_invert(&f)));
    println!("f o g     = {}", show(&mj_compose(&f, &g)?));
    let c = mj_commutator(&f, &g)?;
    println!("[f, g]    = {}  (filtration {})", show(&c), c.filtration());

    let v = VectorField::new(vec![q(1, 2), q(0, 1), q(3, 1)]);
    let w = VectorField::new(vec![q(0, 1), q(-1, 1), q(1, 5)]);
    println!("log exp v == v: {}", mj_log(&mj_exp(&v)) == v);
    // flows compose in the opposite order to the derivations they integrate
    println!("exp v o exp w == exp bch(w, v): {}", mj_compose(&mj_exp(&v), &mj_exp(&w))? == mj_exp(&bch(&w, &v)));

    for n in 2..=6 {
        let r = mj_central_series(n, 7);
        println!(
            "n = {}: {} pairs, containment {}, additive quotients {}, top central {}",
            n, r.pairs_checked, r.containment, r.additive_quotients, r.top_central
        );
    }
    Ok(())
}
