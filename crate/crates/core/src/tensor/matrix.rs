use std::ops::{Add, Index, IndexMut, Mul, Sub};

use crate::scalar::{cr, Real, C};

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix<T> {
    dim: usize,
    data: Vec<C<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        CMatrix { dim, data: vec![C::new(T::zero(), T::zero()); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = cr(T::one());
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C<T>) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        CMatrix { dim, data }
    }

    pub fn from_diag(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = cr(d);
        }
        m
    }

    /// Row-major data of length `dim * dim`.
    pub fn from_rows(dim: usize, data: Vec<C<T>>) -> Option<Self> {
        (data.len() == dim * dim).then_some(CMatrix { dim, data })
    }

    /// `|u><v|`
    pub fn outer(u: &[C<T>], v: &[C<T>]) -> Self {
        assert_eq!(u.len(), v.len(), "outer product of unequal lengths");
        Self::from_fn(u.len(), |i, j| u[i] * v[j].conj())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C<T>] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C<T>] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn diagonal(&self) -> Vec<C<T>> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> C<T> {
        (0..self.dim).map(|i| self[(i, i)]).fold(cr(T::zero()), |a, b| a + b)
    }

    pub fn scale(&self, s: T) -> Self {
        CMatrix { dim: self.dim, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn scale_c(&self, s: C<T>) -> Self {
        CMatrix { dim: self.dim, data: self.data.iter().map(|z| z * s).collect() }
    }

    /// `self + s * I`
    pub fn shift(&self, s: T) -> Self {
        let mut m = self.clone();
        for i in 0..self.dim {
            m[(i, i)] += cr(s);
        }
        m
    }

    /// Kronecker product; `self` is the more significant factor.
    pub fn kron(&self, other: &Self) -> Self {
        let (n, k) = (self.dim, other.dim);
        Self::from_fn(n * k, |i, j| self[(i / k, j / k)] * other[(i % k, j % k)])
    }

    pub fn mul_vec(&self, v: &[C<T>]) -> Vec<C<T>> {
        assert_eq!(v.len(), self.dim, "matrix-vector dimension mismatch");
        (0..self.dim).map(|i| self.row(i).iter().zip(v).fold(cr(T::zero()), |acc, (a, b)| acc + a * b)).collect()
    }

    /// `<v|A|v>`
    pub fn quadratic_form(&self, v: &[C<T>]) -> C<T> {
        let av = self.mul_vec(v);
        v.iter().zip(&av).fold(cr(T::zero()), |acc, (a, b)| acc + a.conj() * b)
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.dim, other.dim, "comparing matrices of different size");
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(T::zero(), T::max)
    }

    /// `max |A_ij - conj(A_ji)|`
    pub fn hermitian_deviation(&self) -> T {
        let mut dev = T::zero();
        for i in 0..self.dim {
            for j in i..self.dim {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }
}

impl<T> Index<(usize, usize)> for CMatrix<T> {
    type Output = C<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C<T> {
        &self.data[i * self.dim + j]
    }
}

impl<T> IndexMut<(usize, usize)> for CMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C<T> {
        &mut self.data[i * self.dim + j]
    }
}

impl<T: Real> Add for &CMatrix<T> {
    type Output = CMatrix<T>;
    fn add(self, rhs: Self) -> CMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "adding matrices of different size");
        CMatrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl<T: Real> Sub for &CMatrix<T> {
    type Output = CMatrix<T>;
    fn sub(self, rhs: Self) -> CMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "subtracting matrices of different size");
        CMatrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

impl<T: Real> Mul for &CMatrix<T> {
    type Output = CMatrix<T>;
    fn mul(self, rhs: Self) -> CMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "multiplying matrices of different size");
        let n = self.dim;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

impl<T: Real> std::ops::AddAssign<&CMatrix<T>> for CMatrix<T> {
    fn add_assign(&mut self, rhs: &CMatrix<T>) {
        assert_eq!(self.dim, rhs.dim, "adding matrices of different size");
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }
}

/// Sum of a sequence of equally sized matrices.
pub fn sum_matrices<'a, T: Real>(dim: usize, items: impl IntoIterator<Item = &'a CMatrix<T>>) -> CMatrix<T> {
    let mut acc = CMatrix::zeros(dim);
    for m in items {
        acc += m;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    fn pauli_z() -> CMatrix<f64> {
        CMatrix::from_diag(&[1.0, -1.0])
    }

    #[test]
    fn kron_of_identities_is_identity() {
        let i2 = CMatrix::<f64>::identity(2);
        assert_eq!(i2.kron(&i2), CMatrix::identity(4));
    }

    #[test]
    fn kron_zz_diagonal() {
        let zz = pauli_z().kron(&pauli_z());
        let d: Vec<f64> = zz.diagonal().iter().map(|z| z.re).collect();
        assert_eq!(d, vec![1.0, -1.0, -1.0, 1.0]);
        assert_eq!(zz.max_abs_diff(&CMatrix::from_diag(&d)), 0.0);
    }

    #[test]
    fn adjoint_and_hermitian_deviation() {
        let m = CMatrix::from_fn(2, |i, j| c(i as f64, j as f64));
        assert_eq!(m.adjoint().adjoint(), m);
        assert!(m.hermitian_deviation() > 0.5);
        let h = &m + &m.adjoint();
        assert_eq!(h.hermitian_deviation(), 0.0);
    }

    #[test]
    fn mul_matches_hand_product() {
        let x = CMatrix::from_fn(2, |i, j| cr(if i != j { 1.0 } else { 0.0 }));
        let xz = &x * &pauli_z();
        // [[0,1],[1,0]] * diag(1,-1) = [[0,-1],[1,0]]
        assert_eq!(xz[(0, 1)], cr(-1.0));
        assert_eq!(xz[(1, 0)], cr(1.0));
        assert_eq!(xz.trace(), cr(0.0));
    }
}
