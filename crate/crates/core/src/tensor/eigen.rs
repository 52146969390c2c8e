//! Dense Hermitian eigendecomposition by cyclic complex Jacobi rotations.
//!
//! Every operator in this crate is at most 64x64, where Jacobi is both fast
//! enough and accurate to a few ulps of the spectral norm.

use crate::error::{Error, Result};
use crate::scalar::{cr, Real, C};
use crate::tensor::CMatrix;

const MAX_SWEEPS: usize = 64;

/// Eigenvalues in ascending order; `vectors` holds the matching
/// eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen<T> {
    pub values: Vec<T>,
    pub vectors: CMatrix<T>,
}

impl<T: Real> HermitianEigen<T> {
    pub fn vector(&self, k: usize) -> Vec<C<T>> {
        (0..self.vectors.dim()).map(|i| self.vectors[(i, k)]).collect()
    }

    pub fn min(&self) -> T {
        self.values[0]
    }

    pub fn max(&self) -> T {
        *self.values.last().expect("non-empty spectrum")
    }

    /// Eigenvector of the largest eigenvalue.
    pub fn top_vector(&self) -> Vec<C<T>> {
        self.vector(self.values.len() - 1)
    }
}

/// Full eigendecomposition of the Hermitian part of `a`.
pub fn eigh<T: Real>(a: &CMatrix<T>) -> Result<HermitianEigen<T>> {
    let n = a.dim();
    let half = T::lit(0.5);
    let mut m = CMatrix::from_fn(n, |i, j| (a[(i, j)] + a[(j, i)].conj()) * half);
    let mut v = CMatrix::identity(n);

    let scale = m.frobenius_norm();
    if n == 0 || scale == T::zero() {
        return Ok(HermitianEigen { values: vec![T::zero(); n], vectors: v });
    }
    let eps = T::epsilon();
    // entries below this are zeroed outright; they move eigenvalues by less
    // than the residual off-diagonal mass already tolerated
    let negligible = eps * scale / T::from_usize_lossy(n);

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let off = off_diagonal_norm(&m);
        if off <= eps * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                let r = apq.norm();
                if r <= negligible {
                    m[(p, q)] = cr(T::zero());
                    m[(q, p)] = cr(T::zero());
                    continue;
                }
                rotate(&mut m, &mut v, p, q, apq, r);
            }
        }
    }
    if !converged && off_diagonal_norm(&m) > eps * scale * T::from_usize_lossy(n) {
        return Err(Error::NonConvergence { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<T> = (0..n).map(|i| m[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).expect("finite eigenvalues"));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = CMatrix::from_fn(n, |i, k| v[(i, order[k])]);
    Ok(HermitianEigen { values, vectors })
}

fn off_diagonal_norm<T: Real>(m: &CMatrix<T>) -> T {
    let n = m.dim();
    let mut s = T::zero();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += m[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Applies `m <- J^H m J`, `v <- v J` with `J` chosen to annihilate `m[p][q]`.
///
/// `J = diag(1, e^{-i phi}) R(c, s)` on the (p, q) plane, where
/// `m[p][q] = r e^{i phi}` and `R` is the real Jacobi rotation for the
/// phase-stripped 2x2 block.
fn rotate<T: Real>(m: &mut CMatrix<T>, v: &mut CMatrix<T>, p: usize, q: usize, apq: C<T>, r: T) {
    let n = m.dim();
    let phase_conj = (apq / r).conj();
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    let theta = (aqq - app) / (T::lit(2.0) * r);
    let t = if theta.is_infinite() {
        T::zero()
    } else {
        let sgn = if theta >= T::zero() { T::one() } else { -T::one() };
        sgn / (theta.abs() + (theta * theta + T::one()).sqrt())
    };
    let cs = T::one() / (t * t + T::one()).sqrt();
    let sn = t * cs;

    let j_pp = cr(cs);
    let j_pq = cr(sn);
    let j_qp = phase_conj * (-sn);
    let j_qq = phase_conj * cs;

    for i in 0..n {
        let x = m[(i, p)];
        let y = m[(i, q)];
        m[(i, p)] = x * j_pp + y * j_qp;
        m[(i, q)] = x * j_pq + y * j_qq;
    }
    for j in 0..n {
        let x = m[(p, j)];
        let y = m[(q, j)];
        m[(p, j)] = j_pp.conj() * x + j_qp.conj() * y;
        m[(q, j)] = j_pq.conj() * x + j_qq.conj() * y;
    }
    m[(p, q)] = cr(T::zero());
    m[(q, p)] = cr(T::zero());
    m[(p, p)] = cr(m[(p, p)].re);
    m[(q, q)] = cr(m[(q, q)].re);

    for i in 0..n {
        let x = v[(i, p)];
        let y = v[(i, q)];
        v[(i, p)] = x * j_pp + y * j_qp;
        v[(i, q)] = x * j_pq + y * j_qq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(n: usize, rng: &mut impl Rng) -> CMatrix<f64> {
        let a = CMatrix::from_fn(n, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        &a + &a.adjoint()
    }

    #[test]
    fn diagonal_input() {
        let e = eigh(&CMatrix::<f64>::from_diag(&[3.0, -2.0])).unwrap();
        assert_eq!(e.values, vec![-2.0, 3.0]);
    }

    #[test]
    fn pauli_y_spectrum() {
        let y = CMatrix::from_fn(2, |i, j| match (i, j) {
            (0, 1) => c(0.0, -1.0),
            (1, 0) => c(0.0, 1.0),
            _ => cr(0.0),
        });
        let e = eigh(&y).unwrap();
        assert!((e.values[0] + 1.0f64).abs() < 1e-15);
        assert!((e.values[1] - 1.0f64).abs() < 1e-15);
    }

    #[test]
    fn eigenpairs_satisfy_definition() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for &n in &[1usize, 2, 3, 5, 8, 16, 33, 64] {
            let a = random_hermitian(n, &mut rng);
            let e = eigh(&a).unwrap();
            let scale = a.frobenius_norm();
            for k in 0..n {
                let x = e.vector(k);
                let ax = a.mul_vec(&x);
                let resid: f64 = ax.iter().zip(&x).map(|(l, r)| (l - r * e.values[k]).norm_sqr()).sum::<f64>().sqrt();
                assert!(resid < 1e-12 * scale.max(1.0), "n={n} k={k} resid={resid}");
            }
            // orthonormal columns
            let vhv = &e.vectors.adjoint() * &e.vectors;
            assert!(vhv.max_abs_diff(&CMatrix::identity(n)) < 1e-12);
            let tr: f64 = e.values.iter().sum();
            assert!((tr - a.trace().re).abs() < 1e-11 * scale.max(1.0));
            assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn degenerate_spectrum() {
        let e = eigh(&CMatrix::<f64>::identity(16)).unwrap();
        assert!(e.values.iter().all(|&x| x == 1.0));
    }

    #[test]
    fn single_precision() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_hermitian(8, &mut rng);
        let a32 = CMatrix::from_fn(8, |i, j| c(a[(i, j)].re as f32, a[(i, j)].im as f32));
        let e64 = eigh(&a).unwrap();
        let e32 = eigh(&a32).unwrap();
        for (x, y) in e64.values.iter().zip(&e32.values) {
            assert!((x - *y as f64).abs() < 1e-4);
        }
    }
}
