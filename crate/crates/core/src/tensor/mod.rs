//! Dense complex tensor algebra over small multi-party Hilbert spaces.

mod eigen;
mod matrix;
mod structure;

pub use eigen::{eigh, HermitianEigen};
pub use matrix::{sum_matrices, CMatrix};
pub use structure::{Bipartition, PartyStructure};

use crate::error::{Error, Result};
use crate::scalar::{cr, Real, C};

/// Normalized pure state on a multi-party space.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState<T> {
    amplitudes: Vec<C<T>>,
    structure: PartyStructure,
}

impl<T: Real> PureState<T> {
    pub fn new(amplitudes: Vec<C<T>>, structure: PartyStructure) -> Result<Self> {
        check_len(structure.total_dim(), amplitudes.len())?;
        let norm = vec_norm(&amplitudes);
        if (norm - T::one()).abs() > T::structural_tol() {
            return Err(Error::NotNormalized { norm: norm.to_f64().unwrap_or(f64::NAN) });
        }
        Ok(PureState { amplitudes, structure })
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalized(mut amplitudes: Vec<C<T>>, structure: PartyStructure) -> Result<Self> {
        check_len(structure.total_dim(), amplitudes.len())?;
        let norm = vec_norm(&amplitudes);
        if norm == T::zero() || !norm.is_finite() {
            return Err(Error::NotNormalized { norm: norm.to_f64().unwrap_or(f64::NAN) });
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Ok(PureState { amplitudes, structure })
    }

    pub fn basis(structure: PartyStructure, index: usize) -> Result<Self> {
        let dim = structure.total_dim();
        if index >= dim {
            return Err(Error::LevelOutOfRange { level: index, dim });
        }
        let mut amps = vec![cr(T::zero()); dim];
        amps[index] = cr(T::one());
        Ok(PureState { amplitudes: amps, structure })
    }

    /// `|a> (x) |b>` with `a` living on `cut.side_a()` and `b` on `cut.side_b()`.
    pub fn product_across(structure: &PartyStructure, cut: &Bipartition, a: &[C<T>], b: &[C<T>]) -> Result<Self> {
        check_len(cut.dim_a(), a.len())?;
        check_len(cut.dim_b(), b.len())?;
        let mut amps = vec![cr(T::zero()); structure.total_dim()];
        for (ia, x) in a.iter().enumerate() {
            for (ib, y) in b.iter().enumerate() {
                amps[cut.flat_index(ia, ib)] = x * y;
            }
        }
        Self::normalized(amps, structure.clone())
    }

    pub fn amplitudes(&self) -> &[C<T>] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> C<T> {
        self.amplitudes[index]
    }

    pub fn structure(&self) -> &PartyStructure {
        &self.structure
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> T {
        vec_norm(&self.amplitudes)
    }

    /// `<self|other>`
    pub fn inner(&self, other: &Self) -> C<T> {
        self.amplitudes.iter().zip(&other.amplitudes).fold(cr(T::zero()), |acc, (a, b)| acc + a.conj() * b)
    }

    /// `|s><s|`
    pub fn projector(&self) -> HermitianOperator<T> {
        HermitianOperator {
            matrix: CMatrix::outer(&self.amplitudes, &self.amplitudes),
            structure: self.structure.clone(),
        }
    }
}

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T> {
    matrix: CMatrix<T>,
    structure: PartyStructure,
}

impl<T: Real> DensityMatrix<T> {
    pub fn new(matrix: CMatrix<T>, structure: PartyStructure) -> Result<Self> {
        check_len(structure.total_dim(), matrix.dim())?;
        let dev = matrix.hermitian_deviation();
        if dev > T::structural_tol() {
            return Err(Error::NotHermitian { deviation: dev.to_f64().unwrap_or(f64::NAN) });
        }
        let tr = matrix.trace().re;
        if (tr - T::one()).abs() > T::trace_tol() {
            return Err(Error::InvalidDensity(format!("trace {tr} != 1")));
        }
        let lo = eigh(&matrix)?.min();
        if lo < -T::trace_tol() {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {lo}")));
        }
        Ok(DensityMatrix { matrix, structure })
    }

    pub fn from_pure(state: &PureState<T>) -> Self {
        DensityMatrix {
            matrix: CMatrix::outer(&state.amplitudes, &state.amplitudes),
            structure: state.structure.clone(),
        }
    }

    pub fn maximally_mixed(structure: PartyStructure) -> Self {
        let dim = structure.total_dim();
        DensityMatrix { matrix: CMatrix::identity(dim).scale(T::one() / T::from_usize_lossy(dim)), structure }
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn structure(&self) -> &PartyStructure {
        &self.structure
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }
}

/// Dense Hermitian operator carrying its party structure.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator<T> {
    matrix: CMatrix<T>,
    structure: PartyStructure,
}

impl<T: Real> HermitianOperator<T> {
    pub fn new(matrix: CMatrix<T>, structure: PartyStructure) -> Result<Self> {
        check_len(structure.total_dim(), matrix.dim())?;
        let dev = matrix.hermitian_deviation();
        // entrywise tolerance scales with the operator's magnitude
        if dev > T::structural_tol() * matrix.max_abs().max(T::one()) {
            return Err(Error::NotHermitian { deviation: dev.to_f64().unwrap_or(f64::NAN) });
        }
        Ok(HermitianOperator { matrix, structure })
    }

    pub fn identity(structure: PartyStructure) -> Self {
        HermitianOperator { matrix: CMatrix::identity(structure.total_dim()), structure }
    }

    pub fn zeros(structure: PartyStructure) -> Self {
        HermitianOperator { matrix: CMatrix::zeros(structure.total_dim()), structure }
    }

    /// Product of local operators placed at the given parties, identity elsewhere.
    pub fn local_product(structure: &PartyStructure, factors: &[(usize, &CMatrix<T>)]) -> Result<Self> {
        let m = embed_local(structure, factors)?;
        Self::new(m, structure.clone())
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn structure(&self) -> &PartyStructure {
        &self.structure
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn trace(&self) -> T {
        self.matrix.trace().re
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_structure(other)?;
        Ok(HermitianOperator { matrix: &self.matrix + &other.matrix, structure: self.structure.clone() })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_structure(other)?;
        Ok(HermitianOperator { matrix: &self.matrix - &other.matrix, structure: self.structure.clone() })
    }

    pub fn scaled(&self, s: T) -> Self {
        HermitianOperator { matrix: self.matrix.scale(s), structure: self.structure.clone() }
    }

    /// `self + s * I`
    pub fn shifted(&self, s: T) -> Self {
        HermitianOperator { matrix: self.matrix.shift(s), structure: self.structure.clone() }
    }

    /// `U self U^H` for a unitary `u` of matching dimension.
    pub fn conjugated(&self, u: &CMatrix<T>) -> Result<Self> {
        check_len(self.dim(), u.dim())?;
        let m = &(u * &self.matrix) * &u.adjoint();
        Self::new(m, self.structure.clone())
    }

    /// Weighted sum `sum_k w_k A_k`; all terms must share `structure`.
    pub fn weighted_sum<'a>(
        structure: &PartyStructure,
        terms: impl IntoIterator<Item = (T, &'a HermitianOperator<T>)>,
    ) -> Result<Self> {
        let mut acc = CMatrix::zeros(structure.total_dim());
        for (w, op) in terms {
            if op.structure != *structure {
                return Err(Error::DimensionMismatch { expected: structure.total_dim(), found: op.dim() });
            }
            acc += &op.matrix.scale(w);
        }
        Ok(HermitianOperator { matrix: acc, structure: structure.clone() })
    }

    pub fn eigen(&self) -> Result<HermitianEigen<T>> {
        eigh(&self.matrix)
    }

    pub fn spectral_norm(&self) -> Result<T> {
        let e = self.eigen()?;
        Ok(e.min().abs().max(e.max().abs()))
    }

    fn same_structure(&self, other: &Self) -> Result<()> {
        if self.structure == other.structure {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() })
        }
    }
}

/// Tensor product; `self` becomes the leading parties.
pub trait Kron {
    fn kron(&self, other: &Self) -> Self;
}

impl<T: Real> Kron for PureState<T> {
    fn kron(&self, other: &Self) -> Self {
        let amplitudes = self.amplitudes.iter().flat_map(|a| other.amplitudes.iter().map(move |b| a * b)).collect();
        PureState { amplitudes, structure: self.structure.concat(&other.structure) }
    }
}

impl<T: Real> Kron for HermitianOperator<T> {
    fn kron(&self, other: &Self) -> Self {
        HermitianOperator {
            matrix: self.matrix.kron(&other.matrix),
            structure: self.structure.concat(&other.structure),
        }
    }
}

impl<T: Real> Kron for DensityMatrix<T> {
    fn kron(&self, other: &Self) -> Self {
        DensityMatrix { matrix: self.matrix.kron(&other.matrix), structure: self.structure.concat(&other.structure) }
    }
}

/// Anything an operator can be evaluated on.
pub trait QuantumState<T: Real> {
    fn structure(&self) -> &PartyStructure;

    /// `<s|A|s>` or `Tr(A rho)` without the Hermiticity assertion.
    fn raw_expectation(&self, matrix: &CMatrix<T>) -> C<T>;

    /// `<v|rho|v>` for a unit vector `v`.
    fn probability(&self, v: &[C<T>]) -> T;

    fn total_dim(&self) -> usize {
        self.structure().total_dim()
    }
}

impl<T: Real> QuantumState<T> for PureState<T> {
    fn structure(&self) -> &PartyStructure {
        &self.structure
    }

    fn raw_expectation(&self, matrix: &CMatrix<T>) -> C<T> {
        matrix.quadratic_form(&self.amplitudes)
    }

    fn probability(&self, v: &[C<T>]) -> T {
        v.iter().zip(&self.amplitudes).fold(cr(T::zero()), |acc, (a, b)| acc + a.conj() * b).norm_sqr()
    }
}

impl<T: Real> QuantumState<T> for DensityMatrix<T> {
    fn structure(&self) -> &PartyStructure {
        &self.structure
    }

    fn raw_expectation(&self, matrix: &CMatrix<T>) -> C<T> {
        // Tr(A rho) = sum_ij A_ij rho_ji
        let n = matrix.dim();
        let mut acc = cr(T::zero());
        for i in 0..n {
            for j in 0..n {
                acc += matrix[(i, j)] * self.matrix[(j, i)];
            }
        }
        acc
    }

    fn probability(&self, v: &[C<T>]) -> T {
        self.matrix.quadratic_form(v).re
    }
}

/// Real expectation value of `op` on `state`.
///
/// Fails on dimension mismatch and when the imaginary part exceeds the
/// trace tolerance scaled by the operator's size, which only happens for
/// non-Hermitian input.
pub fn expectation<T: Real, S: QuantumState<T> + ?Sized>(op: &HermitianOperator<T>, state: &S) -> Result<T> {
    check_len(op.dim(), state.total_dim())?;
    let z = state.raw_expectation(&op.matrix);
    let allowed = T::trace_tol() * op.matrix.frobenius_norm().max(T::one());
    if z.im.abs() > allowed {
        return Err(Error::ImaginaryResidue { residue: z.im.abs().to_f64().unwrap_or(f64::NAN) });
    }
    Ok(z.re)
}

pub fn min_eigenvalue<T: Real>(op: &HermitianOperator<T>) -> Result<T> {
    Ok(op.eigen()?.min())
}

pub fn max_eigenvalue<T: Real>(op: &HermitianOperator<T>) -> Result<T> {
    Ok(op.eigen()?.max())
}

/// Largest squared Schmidt coefficient of `state` across `subset | rest`.
pub fn schmidt_max_sq<T: Real>(state: &PureState<T>, subset: &[usize]) -> Result<T> {
    let cut = state.structure.bipartition(subset)?;
    schmidt_max_sq_cut(state, &cut)
}

pub(crate) fn schmidt_max_sq_cut<T: Real>(state: &PureState<T>, cut: &Bipartition) -> Result<T> {
    // reduced density matrix on the smaller side; its top eigenvalue is the
    // squared top singular value of the reshaped amplitude matrix
    let (da, db) = (cut.dim_a(), cut.dim_b());
    let amp = |ia: usize, ib: usize| state.amplitudes[cut.flat_index(ia, ib)];
    let reduced = if da <= db {
        CMatrix::from_fn(da, |i, k| (0..db).fold(cr(T::zero()), |acc, j| acc + amp(i, j) * amp(k, j).conj()))
    } else {
        CMatrix::from_fn(db, |j, l| (0..da).fold(cr(T::zero()), |acc, i| acc + amp(i, j) * amp(i, l).conj()))
    };
    Ok(eigh(&reduced)?.max())
}

/// Kronecker product of local factors at the listed parties, identity elsewhere.
pub fn embed_local<T: Real>(structure: &PartyStructure, factors: &[(usize, &CMatrix<T>)]) -> Result<CMatrix<T>> {
    for &(p, m) in factors {
        structure.check_party(p)?;
        check_len(structure.dims()[p], m.dim())?;
    }
    let mut acc: Option<CMatrix<T>> = None;
    for (p, &d) in structure.dims().iter().enumerate() {
        let local = match factors.iter().rev().find(|(q, _)| *q == p) {
            Some((_, m)) => (*m).clone(),
            None => CMatrix::identity(d),
        };
        acc = Some(match acc {
            None => local,
            Some(a) => a.kron(&local),
        });
    }
    Ok(acc.expect("structure is non-empty"))
}

fn vec_norm<T: Real>(v: &[C<T>]) -> T {
    v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    fn ket(bits: &[usize]) -> PureState<f64> {
        let s = PartyStructure::qubits(bits.len());
        let idx = s.index(bits);
        PureState::basis(s, idx).unwrap()
    }

    #[test]
    fn kron_basis_bookkeeping() {
        let k = ket(&[0]).kron(&ket(&[1]));
        assert_eq!(k.amplitude(1), cr(1.0));
        assert_eq!(k.structure().dims(), &[2, 2]);
    }

    #[test]
    fn identity_expectation_is_one() {
        let s = PureState::<f64>::normalized(
            vec![c(1.0, 2.0), c(-0.5, 0.0), c(0.0, 3.0)],
            PartyStructure::new(vec![3]).unwrap(),
        )
        .unwrap();
        let id = HermitianOperator::identity(s.structure().clone());
        assert!((expectation(&id, &s).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn expectation_rejects_mismatch() {
        let id = HermitianOperator::<f64>::identity(PartyStructure::qubits(3));
        assert!(matches!(expectation(&id, &ket(&[0, 1])), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = CMatrix::from_fn(2, |i, j| if i == 0 && j == 1 { cr(1.0) } else { cr(0.0) });
        assert!(HermitianOperator::new(m, PartyStructure::qubits(1)).is_err());
    }

    #[test]
    fn rejects_unnormalized_state() {
        let r = PureState::<f64>::new(vec![cr(1.0), cr(1.0)], PartyStructure::qubits(1));
        assert!(matches!(r, Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn min_eigenvalue_of_diagonal() {
        let op = HermitianOperator::new(CMatrix::from_diag(&[3.0, -2.0]), PartyStructure::qubits(1)).unwrap();
        assert_eq!(min_eigenvalue(&op).unwrap(), -2.0);
        assert_eq!(min_eigenvalue(&HermitianOperator::<f64>::identity(PartyStructure::qubits(4))).unwrap(), 1.0);
    }

    #[test]
    fn schmidt_of_product_and_bell() {
        assert!((schmidt_max_sq(&ket(&[0, 1, 1]), &[1]).unwrap() - 1.0).abs() < 1e-14);
        let h = 1.0 / 2f64.sqrt();
        let bell = PureState::new(vec![cr(h), cr(0.0), cr(0.0), cr(h)], PartyStructure::qubits(2)).unwrap();
        assert!((schmidt_max_sq(&bell, &[0]).unwrap() - 0.5).abs() < 1e-14);
        assert!(schmidt_max_sq(&bell, &[]).is_err());
        assert!(schmidt_max_sq(&bell, &[0, 1]).is_err());
    }

    #[test]
    fn density_matrix_validation() {
        let s = PartyStructure::qubits(1);
        assert!(DensityMatrix::<f64>::new(CMatrix::from_diag(&[0.5, 0.5]), s.clone()).is_ok());
        assert!(DensityMatrix::<f64>::new(CMatrix::from_diag(&[1.5, -0.5]), s.clone()).is_err());
        assert!(DensityMatrix::<f64>::new(CMatrix::from_diag(&[0.5, 0.6]), s).is_err());
    }

    #[test]
    fn embed_local_places_factors() {
        let s = PartyStructure::qubits(3);
        let p1 = CMatrix::<f64>::from_diag(&[0.0, 1.0]);
        let op = embed_local(&s, &[(1, &p1)]).unwrap();
        // diag is 1 where the middle bit is set
        let d: Vec<f64> = op.diagonal().iter().map(|z| z.re).collect();
        assert_eq!(d, vec![0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 1.0, 1.0]);
    }
}
