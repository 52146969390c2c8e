//! Correlator operators: signed sums of joint-outcome projectors whose
//! expectation values are joint-probability differences.
//!
//! A correlator *pair* `(c0, c1)` certifies dependence between the two sides
//! of its cut when both expectations share a sign; for independent sides
//! their product is never positive. A correlator *family* certifies
//! dependence when every member is positive; for a party independent of
//! the rest the members sum to a non-positive-weighted zero, so they cannot
//! all be positive.
//!
//! Parties are 0-based: party 0 is the leftmost tensor factor.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::Rational64;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{c, cis, cr, Real, C};
use crate::tensor::{embed_local, expectation, sum_matrices, CMatrix, HermitianOperator, PartyStructure, QuantumState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum BasisKind {
    Z,
    X,
    Y,
    /// `|g> = d^{-1/2} sum_h exp(-2 pi i h (g + offset) / d) |h>`
    Fourier,
}

/// A local orthonormal measurement basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LocalBasis {
    kind: BasisKind,
    dim: usize,
    offset: Rational64,
}

impl LocalBasis {
    pub fn z(dim: usize) -> Self {
        LocalBasis { kind: BasisKind::Z, dim, offset: Rational64::from_integer(0) }
    }

    pub fn x() -> Self {
        LocalBasis { kind: BasisKind::X, dim: 2, offset: Rational64::from_integer(0) }
    }

    pub fn y() -> Self {
        LocalBasis { kind: BasisKind::Y, dim: 2, offset: Rational64::from_integer(0) }
    }

    pub fn fourier(dim: usize) -> Self {
        Self::fourier_with_offset(dim, Rational64::from_integer(0))
    }

    pub fn fourier_with_offset(dim: usize, offset: Rational64) -> Self {
        LocalBasis { kind: BasisKind::Fourier, dim, offset }
    }

    /// Qubit basis of the given Pauli kind.
    pub fn qubit(kind: BasisKind) -> Self {
        match kind {
            BasisKind::Z => Self::z(2),
            BasisKind::X => Self::x(),
            BasisKind::Y => Self::y(),
            BasisKind::Fourier => Self::fourier(2),
        }
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn offset(&self) -> Rational64 {
        self.offset
    }

    pub fn vector<T: Real>(&self, level: usize) -> Result<Vec<C<T>>> {
        if level >= self.dim {
            return Err(Error::LevelOutOfRange { level, dim: self.dim });
        }
        let h = T::lit(std::f64::consts::FRAC_1_SQRT_2);
        let z = cr(T::zero());
        Ok(match (self.kind, level) {
            (BasisKind::Z, _) => (0..self.dim).map(|i| if i == level { cr(T::one()) } else { z }).collect(),
            (BasisKind::X, 0) => vec![cr(h), cr(h)],
            (BasisKind::X, _) => vec![cr(h), cr(-h)],
            (BasisKind::Y, 0) => vec![cr(h), c(T::zero(), h)],
            (BasisKind::Y, _) => vec![cr(h), c(T::zero(), -h)],
            (BasisKind::Fourier, _) => {
                let d = T::from_usize_lossy(self.dim);
                let shift = T::from_usize_lossy(level) + rational::<T>(self.offset);
                let norm = T::one() / d.sqrt();
                (0..self.dim).map(|k| cis(-T::TAU() * T::from_usize_lossy(k) * shift / d) * norm).collect()
            }
        })
    }

    pub fn projector_matrix<T: Real>(&self, level: usize) -> Result<CMatrix<T>> {
        let v = self.vector::<T>(level)?;
        Ok(CMatrix::outer(&v, &v))
    }

    /// The unitary swapping the two basis vectors of a qubit basis.
    pub fn exchange<T: Real>(&self) -> Result<CMatrix<T>> {
        if self.dim != 2 {
            return Err(Error::InvalidParameter(format!("exchange needs a qubit basis, got dimension {}", self.dim)));
        }
        let v0 = self.vector::<T>(0)?;
        let v1 = self.vector::<T>(1)?;
        Ok(&CMatrix::outer(&v0, &v1) + &CMatrix::outer(&v1, &v0))
    }
}

impl fmt::Display for LocalBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            BasisKind::Z => write!(f, "z{}", self.dim),
            BasisKind::X => write!(f, "x"),
            BasisKind::Y => write!(f, "y"),
            BasisKind::Fourier if *self.offset.numer() == 0 => write!(f, "f{}", self.dim),
            BasisKind::Fourier => write!(f, "f{}({})", self.dim, self.offset),
        }
    }
}

fn rational<T: Real>(r: Rational64) -> T {
    T::lit(r.to_f64().expect("finite rational"))
}

/// Single-party projector onto the `level`-th vector of `basis`.
pub fn local_projector<T: Real>(basis: &LocalBasis, level: usize) -> Result<HermitianOperator<T>> {
    let m = basis.projector_matrix(level)?;
    HermitianOperator::new(m, PartyStructure::new(vec![basis.dim])?)
}

/// Local measurement setting: one basis per party, measured in parallel.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lms(pub Vec<LocalBasis>);

impl Lms {
    pub fn uniform(basis: LocalBasis, parties: usize) -> Self {
        Lms(vec![basis; parties])
    }
}

impl fmt::Display for Lms {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|b| b.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

pub fn count_distinct_lms<'a>(settings: impl IntoIterator<Item = &'a Lms>) -> usize {
    settings.into_iter().collect::<BTreeSet<_>>().len()
}

#[derive(Debug, Clone)]
pub struct CorrelatorPair<T> {
    pub c0: HermitianOperator<T>,
    pub c1: HermitianOperator<T>,
    pub label: String,
    pub lms: Lms,
    /// Parties on one side of the cut whose dependence the pair tests.
    pub cut: Vec<usize>,
}

impl<T: Real> CorrelatorPair<T> {
    pub fn members(&self) -> [&HermitianOperator<T>; 2] {
        [&self.c0, &self.c1]
    }

    pub fn expectations<S: QuantumState<T> + ?Sized>(&self, state: &S) -> Result<(T, T)> {
        Ok((expectation(&self.c0, state)?, expectation(&self.c1, state)?))
    }
}

#[derive(Debug, Clone)]
pub struct CorrelatorFamily<T> {
    pub members: Vec<HermitianOperator<T>>,
    pub label: String,
    pub lms: Lms,
    pub cut: Vec<usize>,
}

impl<T: Real> CorrelatorFamily<T> {
    /// Number of members that must be jointly positive.
    pub fn arity(&self) -> usize {
        self.members.len()
    }

    pub fn expectations<S: QuantumState<T> + ?Sized>(&self, state: &S) -> Result<Vec<T>> {
        self.members.iter().map(|m| expectation(m, state)).collect()
    }
}

/// True iff both members have expectations of the same strict sign.
pub fn prop1_test<T: Real, S: QuantumState<T> + ?Sized>(pair: &CorrelatorPair<T>, state: &S) -> Result<bool> {
    let (a, b) = pair.expectations(state)?;
    Ok(a * b > T::zero())
}

/// True iff every member expectation is strictly positive.
pub fn prop2_test<T: Real, S: QuantumState<T> + ?Sized>(family: &CorrelatorFamily<T>, state: &S) -> Result<bool> {
    Ok(family.expectations(state)?.into_iter().all(|e| e > T::zero()))
}

// ---------------------------------------------------------------------------
// generalized four-qubit GHZ

fn qubit_projectors<T: Real>(basis: LocalBasis) -> [CMatrix<T>; 2] {
    [basis.projector_matrix(0).expect("level 0"), basis.projector_matrix(1).expect("level 1")]
}

fn others(n: usize, exclude: &[usize]) -> Vec<usize> {
    (0..n).filter(|p| !exclude.contains(p)).collect()
}

fn check_party(party: usize, parties: usize) -> Result<()> {
    if party < parties {
        Ok(())
    } else {
        Err(Error::PartyOutOfRange { party, parties })
    }
}

/// Party `n` against the other three under all-z:
/// `c0 = (P0 - P1)_n P0 P0 P0`, `c1 = (P1 - P0)_n P1 P1 P1`.
pub fn ghz4_party_z<T: Real>(n: usize) -> Result<CorrelatorPair<T>> {
    check_party(n, 4)?;
    let s = PartyStructure::qubits(4);
    let [p0, p1] = qubit_projectors::<T>(LocalBasis::z(2));
    let rest = others(4, &[n]);
    let build = |v: usize| -> Result<HermitianOperator<T>> {
        let (same, flip) = if v == 0 { (&p0, &p1) } else { (&p1, &p0) };
        let diff = same - flip;
        let mut factors: Vec<(usize, &CMatrix<T>)> = vec![(n, &diff)];
        factors.extend(rest.iter().map(|&p| (p, same)));
        HermitianOperator::local_product(&s, &factors)
    };
    Ok(CorrelatorPair {
        c0: build(0)?,
        c1: build(1)?,
        label: format!("ghz4/z/party{n}"),
        lms: Lms::uniform(LocalBasis::z(2), 4),
        cut: vec![n],
    })
}

/// Parties `{n, m}` against the other two under all-z:
/// `c0 = (P00 - P11)_{nm} P0 P0`, `c1 = (P11 - P00)_{nm} P1 P1`.
pub fn ghz4_pair_z<T: Real>(n: usize, m: usize) -> Result<CorrelatorPair<T>> {
    check_party(n, 4)?;
    check_party(m, 4)?;
    if n == m {
        return Err(Error::InvalidParameter(format!("pair correlator needs distinct parties, got {n} twice")));
    }
    let s = PartyStructure::qubits(4);
    let [p0, p1] = qubit_projectors::<T>(LocalBasis::z(2));
    let rest = others(4, &[n, m]);
    let tail = |v: &CMatrix<T>| -> Result<CMatrix<T>> { embed_local(&s, &[(rest[0], v), (rest[1], v)]) };
    let both = |v: &CMatrix<T>| -> Result<CMatrix<T>> { embed_local(&s, &[(n, v), (m, v)]) };
    let group_diff = &both(&p0)? - &both(&p1)?;
    let c0 = &group_diff * &tail(&p0)?;
    let c1 = &group_diff.scale(-T::one()) * &tail(&p1)?;
    Ok(CorrelatorPair {
        c0: HermitianOperator::new(c0, s.clone())?,
        c1: HermitianOperator::new(c1, s)?,
        label: format!("ghz4/z/pair{n}{m}"),
        lms: Lms::uniform(LocalBasis::z(2), 4),
        cut: {
            let mut v = vec![n, m];
            v.sort_unstable();
            v
        },
    })
}

/// Party `n` against the rest under all-x: `c0 = (P0 - P1)_n E`,
/// `c1 = (P1 - P0)_n O` with `E`/`O` the even/odd-parity sums of x
/// projectors on the other three parties.
pub fn ghz4_party_x<T: Real>(n: usize) -> Result<CorrelatorPair<T>> {
    check_party(n, 4)?;
    let s = PartyStructure::qubits(4);
    let px = qubit_projectors::<T>(LocalBasis::x());
    let rest = others(4, &[n]);
    let mut even = CMatrix::zeros(16);
    let mut odd = CMatrix::zeros(16);
    for bits in 0..8usize {
        let levels = [bits >> 2 & 1, bits >> 1 & 1, bits & 1];
        let factors: Vec<(usize, &CMatrix<T>)> = rest.iter().zip(levels).map(|(&p, v)| (p, &px[v])).collect();
        let term = embed_local(&s, &factors)?;
        if levels.iter().sum::<usize>() % 2 == 0 {
            even += &term;
        } else {
            odd += &term;
        }
    }
    let diff = embed_local(&s, &[(n, &(&px[0] - &px[1]))])?;
    let c0 = &diff * &even;
    let c1 = &diff.scale(-T::one()) * &odd;
    Ok(CorrelatorPair {
        c0: HermitianOperator::new(c0, s.clone())?,
        c1: HermitianOperator::new(c1, s)?,
        label: format!("ghz4/x/party{n}"),
        lms: Lms::uniform(LocalBasis::x(), 4),
        cut: vec![n],
    })
}

/// Every pair entering the GHZ combined operator: four single-party z
/// pairs, the three z pairs grouping party 0 with another party, and four
/// single-party x pairs.
pub fn phi_pairs<T: Real>() -> Vec<CorrelatorPair<T>> {
    let mut out = Vec::with_capacity(11);
    out.extend((0..4).map(|n| ghz4_party_z(n).expect("valid party")));
    out.extend((1..4).map(|m| ghz4_pair_z(0, m).expect("valid pair")));
    out.extend((0..4).map(|n| ghz4_party_x(n).expect("valid party")));
    out
}

/// Sum of all members of [`phi_pairs`].
pub fn build_c_phi<T: Real>() -> HermitianOperator<T> {
    let pairs = phi_pairs::<T>();
    let m = sum_matrices(16, pairs.iter().flat_map(|p| p.members()).map(|op| op.matrix()));
    HermitianOperator::new(m, PartyStructure::qubits(4)).expect("sum of Hermitian terms")
}

/// `8(P_0000 + P_1111) - I + 4 X(x)X(x)X(x)X`
pub fn c_phi_closed_form<T: Real>() -> HermitianOperator<T> {
    let mut m = CMatrix::identity(16).scale(-T::one());
    m[(0, 0)] += cr(T::lit(8.0));
    m[(15, 15)] += cr(T::lit(8.0));
    let x = CMatrix::from_fn(2, |i, j| cr(if i != j { T::one() } else { T::zero() }));
    let xxxx = x.kron(&x).kron(&x).kron(&x);
    m += &xxxx.scale(T::lit(4.0));
    HermitianOperator::new(m, PartyStructure::qubits(4)).expect("Hermitian")
}

// ---------------------------------------------------------------------------
// four-qubit singlet

#[derive(Debug, Clone)]
pub struct SingletCorrelators<T> {
    /// One pair per party `m`, flipping party `m` inside the `0011`/`1100` projectors.
    pub first_type: Vec<CorrelatorPair<T>>,
    /// Pairs on groups `(0,1)` / `(2,3)`, flipping one party of the first group.
    pub second_type: Vec<CorrelatorPair<T>>,
}

impl<T: Real> SingletCorrelators<T> {
    pub fn all(&self) -> impl Iterator<Item = &CorrelatorPair<T>> {
        self.first_type.iter().chain(&self.second_type)
    }
}

/// Singlet correlators in the z, x, or y eigenbasis. The flip on a party is
/// the unitary exchanging that basis's two vectors (sigma_x for z, sigma_z
/// for x, and for y the exchange up to phase).
pub fn singlet_correlators<T: Real>(kind: BasisKind) -> Result<SingletCorrelators<T>> {
    if kind == BasisKind::Fourier {
        return Err(Error::InvalidParameter("singlet correlators exist only for z, x, y".into()));
    }
    let basis = LocalBasis::qubit(kind);
    let s = PartyStructure::qubits(4);
    let p = qubit_projectors::<T>(basis);
    let flip = basis.exchange::<T>()?;
    let lms = Lms::uniform(basis, 4);
    let proj = |levels: [usize; 4]| -> Result<CMatrix<T>> {
        let factors: Vec<(usize, &CMatrix<T>)> = levels.iter().enumerate().map(|(q, &v)| (q, &p[v])).collect();
        embed_local(&s, &factors)
    };
    let flip_at = |q: usize| embed_local(&s, &[(q, &flip)]);
    // h - F_q h F_q
    let flipped_difference = |h: &CMatrix<T>, q: usize| -> Result<CMatrix<T>> {
        let f = flip_at(q)?;
        Ok(h - &(&(&f * h) * &f))
    };

    let mut first_type = Vec::with_capacity(4);
    for m in 0..4 {
        let c0 = flipped_difference(&proj([0, 0, 1, 1])?, m)?;
        let c1 = flipped_difference(&proj([1, 1, 0, 0])?, m)?;
        first_type.push(CorrelatorPair {
            c0: HermitianOperator::new(c0, s.clone())?,
            c1: HermitianOperator::new(c1, s.clone())?,
            label: format!("singlet/{basis}/first/party{m}"),
            lms: lms.clone(),
            cut: vec![m],
        });
    }

    let mut second_type = Vec::with_capacity(4);
    for group in 0..2 {
        let (a, b) = (2 * group, 2 * group + 1);
        // the other group; wraps modulo 4 for the second group
        let (c_, d_) = ((2 * group + 2) % 4, (2 * group + 3) % 4);
        let tail = &embed_local(&s, &[(c_, &p[0]), (d_, &p[1])])? + &embed_local(&s, &[(c_, &p[1]), (d_, &p[0])])?;
        for k in [a, b] {
            let h0 = embed_local(&s, &[(a, &p[0]), (b, &p[1])])?;
            let h1 = embed_local(&s, &[(a, &p[1]), (b, &p[0])])?;
            let c0 = &flipped_difference(&h0, k)? * &tail;
            let c1 = &flipped_difference(&h1, k)? * &tail;
            second_type.push(CorrelatorPair {
                c0: HermitianOperator::new(c0, s.clone())?,
                c1: HermitianOperator::new(c1, s.clone())?,
                label: format!("singlet/{basis}/second/group{group}/flip{k}"),
                lms: lms.clone(),
                cut: vec![k],
            });
        }
    }
    Ok(SingletCorrelators { first_type, second_type })
}

pub const SINGLET_BASES: [BasisKind; 3] = [BasisKind::X, BasisKind::Y, BasisKind::Z];

/// `sum_{basis in x,y,z} (5 * first-type members + second-type members)`
pub fn build_c_psi<T: Real>() -> HermitianOperator<T> {
    let s = PartyStructure::qubits(4);
    let five = T::lit(5.0);
    let mut acc = CMatrix::zeros(16);
    for kind in SINGLET_BASES {
        let set = singlet_correlators::<T>(kind).expect("qubit basis");
        for pair in &set.first_type {
            for op in pair.members() {
                acc += &op.matrix().scale(five);
            }
        }
        for pair in &set.second_type {
            for op in pair.members() {
                acc += op.matrix();
            }
        }
    }
    HermitianOperator::new(acc, s).expect("sum of Hermitian terms")
}

// ---------------------------------------------------------------------------
// four-level tripartite GHZ

/// The nine fixed-point-free permutations of `{0,1,2,3}` in lexicographic
/// order. The cyclic shift `k -> k+1` sits at index 1 and `k -> k+2` at
/// index 4.
pub fn derangements4() -> [[usize; 4]; 9] {
    let mut out = [[0usize; 4]; 9];
    let mut count = 0;
    for a in 0..4 {
        for b in 0..4 {
            for c_ in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c_, d];
                    let distinct = (0..4).all(|i| (i + 1..4).all(|j| p[i] != p[j]));
                    let no_fixed = (0..4).all(|i| p[i] != i);
                    if distinct && no_fixed {
                        out[count] = p;
                        count += 1;
                    }
                }
            }
        }
    }
    debug_assert_eq!(count, 9);
    out
}

/// Family `j` (0-based lexicographic derangement index) for party `n`:
///
/// * z basis: `(P_k - P_{s(k)})_n P_k P_k` for `k = 0..4`;
/// * Fourier basis: `(F_k - F_{s(k)})_n V_k` with
///   `V_k = sum_{l + r + k = 0 mod 4} F_l F_r` on the other two parties.
pub fn ghz4x3_correlators<T: Real>(kind: BasisKind, n: usize, j: usize) -> Result<CorrelatorFamily<T>> {
    check_party(n, 3)?;
    if j >= 9 {
        return Err(Error::InvalidParameter(format!("derangement index {j} outside 0..9")));
    }
    let basis = match kind {
        BasisKind::Z => LocalBasis::z(4),
        BasisKind::Fourier => LocalBasis::fourier(4),
        other => return Err(Error::InvalidParameter(format!("four-level families use z or Fourier, not {other:?}"))),
    };
    let s = PartyStructure::uniform(3, 4)?;
    let proj: Vec<CMatrix<T>> = (0..4).map(|k| basis.projector_matrix(k)).collect::<Result<_>>()?;
    let rest = others(3, &[n]);
    let (p, q) = (rest[0], rest[1]);
    let perm = derangements4()[j];

    let mut members = Vec::with_capacity(4);
    for k in 0..4 {
        let diff = &proj[k] - &proj[perm[k]];
        let head = embed_local(&s, &[(n, &diff)])?;
        let tail = match kind {
            BasisKind::Z => embed_local(&s, &[(p, &proj[k]), (q, &proj[k])])?,
            _ => {
                let mut v = CMatrix::zeros(64);
                for l in 0..4 {
                    for r in 0..4 {
                        if (k + l + r) % 4 == 0 {
                            v += &embed_local(&s, &[(p, &proj[l]), (q, &proj[r])])?;
                        }
                    }
                }
                v
            }
        };
        members.push(HermitianOperator::new(&head * &tail, s.clone())?);
    }
    Ok(CorrelatorFamily {
        members,
        label: format!("ghz4x3/{basis}/party{n}/j{j}"),
        lms: Lms::uniform(basis, 3),
        cut: vec![n],
    })
}

pub fn ghz4x3_families<T: Real>(kind: BasisKind) -> Vec<CorrelatorFamily<T>> {
    (0..3).flat_map(|n| (0..9).map(move |j| ghz4x3_correlators(kind, n, j).expect("valid indices"))).collect()
}

/// `sum_{n, j, k} (1.5 C^z_{nk,j} + C^f_{nk,j})`
pub fn build_c_ghz4x3<T: Real>() -> HermitianOperator<T> {
    let s = PartyStructure::uniform(3, 4).expect("valid");
    let mut acc = CMatrix::zeros(64);
    let zw = T::lit(1.5);
    for fam in ghz4x3_families::<T>(BasisKind::Z) {
        for m in &fam.members {
            acc += &m.matrix().scale(zw);
        }
    }
    for fam in ghz4x3_families::<T>(BasisKind::Fourier) {
        for m in &fam.members {
            acc += m.matrix();
        }
    }
    HermitianOperator::new(acc, s).expect("sum of Hermitian terms")
}
