//! Holomorphic k-differentials on the Bolza surface as the numerical kernel
//! of `∂̄`. Pass a resolution to see how the spectral gap behaves.

use highercx::surface::{build_bolza, holomorphic_basis};
use highercx::Result;

fn main() -> Result<()> {
    let res = std::env::args().nth(1).map(|a| a.parse().expect("resolution")).unwrap_or(14);
    let s = build_bolza(res)?;
    println!("resolution {}: {} nodes, area {:.12}", res, s.n_nodes(), s.area());
    for k in 2..=4 {
        let b = holomorphic_basis(&s, k)?;
        println!("k = {}: dimension {} (Riemann-Roch {}), gap {:.2e}", k, b.dim(), 2 * k - 1, b.gap);
        println!("    smallest singular values {:?}", b.smallest.iter().map(|x| format!("{:.1e}", x)).collect::<Vec<_>>());
    }
    Ok(())
}
