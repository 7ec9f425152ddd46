//! Dense complex linear-algebra helpers on top of LAPACK.

use crate::error::{Error, Result};
use ndarray::{s, Array1, Array2, ArrayView1, Axis};
use ndarray_linalg::{Diag, SolveTriangular, QR, SVD, UPLO};
use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Thin QR factorization `M = Q R` of a tall matrix.
#[derive(Clone, Debug)]
pub struct ThinQr {
    pub q: Array2<C>,
    pub r: Array2<C>,
    rh: Array2<C>,
}

impl ThinQr {
    pub fn new(m: &Array2<C>) -> Result<Self> {
        if m.nrows() < m.ncols() {
            return Err(Error::Linalg("thin QR needs a tall matrix".into()));
        }
        let (q, r) = m.qr()?;
        let rh = r.t().mapv(|x| x.conj());
        Ok(ThinQr { q, r, rh })
    }

    /// `R⁻¹ b`.
    pub fn solve_r(&self, b: &Array2<C>) -> Result<Array2<C>> {
        Ok(self.r.solve_triangular(UPLO::Upper, Diag::NonUnit, b)?)
    }

    /// `R⁻ᴴ b`.
    pub fn solve_rh(&self, b: &Array2<C>) -> Result<Array2<C>> {
        Ok(self.rh.solve_triangular(UPLO::Lower, Diag::NonUnit, b)?)
    }

    /// Least-squares solution of `M x = b` for full-rank `M`.
    pub fn lstsq(&self, b: &[C]) -> Result<Vec<C>> {
        let qhb: Array1<C> = self.q.t().dot(&Array1::from(b.to_vec()).mapv(|x| x.conj())).mapv(|x| x.conj());
        let x = self.solve_r(&qhb.insert_axis(Axis(1)))?;
        Ok(x.column(0).to_vec())
    }

    /// Largest singular value, by power iteration on `RᴴR`.
    pub fn largest_singular(&self) -> f64 {
        let n = self.r.ncols();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut x: Array1<C> = (0..n).map(|_| C::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)).collect();
        let mut est = 0.0;
        for _ in 0..40 {
            let nx = x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
            x.mapv_inplace(|v| v / nx);
            let y = self.r.dot(&x);
            let new = y.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
            x = self.rh.dot(&y);
            // a loose estimate is enough: it only scales relative cutoffs
            if (new - est).abs() <= 1e-6 * new {
                return new;
            }
            est = new;
        }
        est
    }

    /// The `p` smallest singular values (ascending) and right singular
    /// vectors (columns) of `R`, which are those of `M`, by block inverse
    /// iteration on `RᴴR` followed by a Rayleigh–Ritz step.
    pub fn smallest_singular(&self, p: usize) -> Result<(Vec<f64>, Array2<C>)> {
        let n = self.r.ncols();
        let p = p.min(n);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut x = Array2::from_shape_fn((n, p), |_| C::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5));
        x = orthonormalize(&x)?;
        let mut prev: Vec<f64> = vec![];
        for it in 1..=400 {
            let y = self.solve_r(&self.solve_rh(&x)?)?;
            x = orthonormalize(&y)?;
            if it % 4 != 0 {
                continue;
            }
            // the lower half of the block converges fastest and is what
            // callers use
            let (sv, _) = ritz(&self.r, &x)?;
            let settled = prev.len() == sv.len()
                && sv.iter().zip(&prev).take(p / 2 + 1).all(|(a, b)| (a - b).abs() <= 1e-10 * a.max(1e-14 * sv[p - 1]));
            prev = sv;
            if settled {
                break;
            }
        }
        let (sv, v) = ritz(&self.r, &x)?;
        Ok((sv, x.dot(&v)))
    }
}

/// Orthonormal basis of the column span (thin QR).
pub fn orthonormalize(x: &Array2<C>) -> Result<Array2<C>> {
    let (q, _) = x.qr()?;
    Ok(q)
}

/// Singular values (ascending) and rotation of `R X` for orthonormal `X`.
fn ritz(r: &Array2<C>, x: &Array2<C>) -> Result<(Vec<f64>, Array2<C>)> {
    let z = r.dot(x);
    let (_, sv, vt) = z.svd(false, true)?;
    let vt = vt.ok_or_else(|| Error::Linalg("SVD returned no right vectors".into()))?;
    let p = sv.len();
    // ascending order
    let order: Vec<usize> = (0..p).rev().collect();
    let vals = order.iter().map(|&i| sv[i]).collect();
    let mut v = Array2::<C>::zeros((x.ncols(), p));
    for (j, &i) in order.iter().enumerate() {
        v.slice_mut(s![.., j]).assign(&vt.row(i).mapv(|c| c.conj()));
    }
    Ok((vals, v))
}

/// `Aᴴ b` for a vector `b`.
pub fn adjoint_mul(a: &Array2<C>, b: &[C]) -> Vec<C> {
    let bc: Array1<C> = b.iter().map(|x| x.conj()).collect();
    a.t().dot(&bc).iter().map(|x| x.conj()).collect()
}

/// `A x` for a vector `x`.
pub fn mat_mul(a: &Array2<C>, x: &[C]) -> Vec<C> {
    a.dot(&ArrayView1::from(x)).to_vec()
}

/// `Aᴴ B`.
pub fn adjoint_dot(a: &Array2<C>, b: &Array2<C>) -> Array2<C> {
    a.t().mapv(|x| x.conj()).dot(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn least_squares_recovers_solution() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = Array2::from_shape_fn((12, 4), |_| C::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5));
        let x: Vec<C> = (0..4).map(|i| C::new(i as f64, 1.0 - i as f64)).collect();
        let b = mat_mul(&m, &x);
        let qr = ThinQr::new(&m).unwrap();
        let y = qr.lstsq(&b).unwrap();
        for (u, v) in x.iter().zip(&y) {
            assert!((u - v).norm() < 1e-12);
        }
    }

    #[test]
    fn singular_values_of_diagonal() {
        let mut m = Array2::<C>::zeros((6, 4));
        for (i, s) in [3.0, 1e-3, 2.0, 0.5].iter().enumerate() {
            m[[i, i]] = C::new(*s, 0.0);
        }
        let qr = ThinQr::new(&m).unwrap();
        let (sv, _) = qr.smallest_singular(2).unwrap();
        assert!((sv[0] - 1e-3).abs() < 1e-12 && (sv[1] - 0.5).abs() < 1e-10);
        assert!((qr.largest_singular() - 3.0).abs() < 1e-5);
    }

    #[test]
    fn adjoint_products() {
        let a = Array2::from_shape_fn((3, 2), |(i, j)| C::new(i as f64, j as f64));
        let b = vec![C::new(1.0, 1.0), C::new(0.0, -1.0), C::new(2.0, 0.0)];
        let direct: Vec<C> = (0..2).map(|j| (0..3).map(|i| a[[i, j]].conj() * b[i]).sum()).collect();
        assert_eq!(adjoint_mul(&a, &b), direct);
        let g = adjoint_dot(&a, &a);
        assert!((g[[0, 1]] - g[[1, 0]].conj()).norm() < 1e-15);
    }

    #[test]
    fn wide_matrices_refused() {
        assert!(ThinQr::new(&Array2::<C>::zeros((2, 3))).is_err());
    }
}
