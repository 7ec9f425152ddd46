//! Baker–Campbell–Hausdorff product through fourth order.
//!
//! Exact for Lie algebras graded so that four-fold brackets already leave
//! the truncation window, which holds for jets of degree 2 to 5 and for
//! the model jet group up to `n = 5`.

/// Minimal vector-space-with-bracket interface.
pub trait Lie: Clone {
    fn add(&self, o: &Self) -> Self;
    /// Multiply by the rational `num / den`.
    fn scale(&self, num: i64, den: i64) -> Self;
    fn bracket(&self, o: &Self) -> Self;
}

/// `log(e^X e^Y)` through fourth order:
/// `X + Y + [X,Y]/2 + ([X,[X,Y]] - [Y,[X,Y]])/12 - [Y,[X,[X,Y]]]/24`.
pub fn bch<L: Lie>(x: &L, y: &L) -> L {
    x.add(y).add(&bch_tail(x, y, &x.bracket(y)))
}

/// The bracket terms of [`bch`], given `[x, y]`. Passing a bracket computed
/// from a cheaper or exactly cancelling expression keeps the cancellation.
pub fn bch_tail<L: Lie>(x: &L, y: &L, xy: &L) -> L {
    let xxy = x.bracket(xy);
    let yxy = y.bracket(xy);
    let yxxy = y.bracket(&xxy);
    xy.scale(1, 2)
        .add(&xxy.scale(1, 12))
        .add(&yxy.scale(-1, 12))
        .add(&yxxy.scale(-1, 24))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modeljet::{mj_compose, mj_exp, q, VectorField};

    #[test]
    fn vanishes_on_commuting_arguments() {
        let v = VectorField::new(vec![q(1, 2), q(-3, 1), q(0, 1)]);
        let w = v.scale(3, 5);
        assert_eq!(bch(&v, &w), v.add(&w));
    }

    #[test]
    fn matches_composition_of_flows() {
        // the time-one maps compose in the opposite order of the derivations
        let v = VectorField::new(vec![q(1, 3), q(2, 1), q(-1, 4), q(5, 7)]);
        let w = VectorField::new(vec![q(-2, 1), q(1, 5), q(3, 2), q(0, 1)]);
        assert_eq!(mj_compose(&mj_exp(&v), &mj_exp(&w)).unwrap(), mj_exp(&bch(&w, &v)));
    }
}
