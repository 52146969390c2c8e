//! Two-qudit Bell functional built from `4d` correlators.
//!
//! Party 1 is the left tensor factor. Settings and parties are labelled
//! 1 and 2 here, matching the physics convention for this functional;
//! measurement outcomes and `m` are 0-based.

use num_rational::Rational64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::{cis, Real, C};
use crate::tensor::QuantumState;

/// Largest `d` for which [`lhv_max`] enumerates all `d^4` assignments.
pub const LHV_ENUMERATION_MAX_D: usize = 40;
const PARALLEL_ABOVE_D: usize = 10;

/// `(16 / 3 pi)^2`, the large-`d` limit of [`analytic_value`].
pub fn analytic_limit<T: Real>() -> T {
    let x = T::lit(16.0) / (T::lit(3.0) * T::PI());
    x * x
}

/// One local measurement: party `k`, setting `q`, phase offset `n_k^(q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeasurementSetting {
    party: u8,
    setting: u8,
    offset: Rational64,
    dim: usize,
}

impl MeasurementSetting {
    pub fn new(party: u8, setting: u8, dim: usize) -> Result<Self> {
        check_dim(dim)?;
        let offset = match (party, setting) {
            (1, 1) => Rational64::new(0, 1),
            (2, 1) => Rational64::new(1, 4),
            (1, 2) => Rational64::new(1, 2),
            (2, 2) => Rational64::new(-1, 4),
            _ => return Err(Error::InvalidParameter(format!("party {party}, setting {setting}: both must be 1 or 2"))),
        };
        Ok(MeasurementSetting { party, setting, offset, dim })
    }

    pub fn party(&self) -> u8 {
        self.party
    }

    pub fn setting(&self) -> u8 {
        self.setting
    }

    pub fn offset(&self) -> Rational64 {
        self.offset
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

/// `(1/sqrt d) sum_m exp[i 2 pi m (l + offset) / d] |m>`
pub fn setting_vector<T: Real>(ms: &MeasurementSetting, l: usize) -> Result<Vec<C<T>>> {
    let d = ms.dim;
    if l >= d {
        return Err(Error::LevelOutOfRange { level: l, dim: d });
    }
    let off = T::lit(*ms.offset.numer() as f64) / T::lit(*ms.offset.denom() as f64);
    let norm = T::one() / T::from_usize_lossy(d).sqrt();
    let step = T::TAU() / T::from_usize_lossy(d);
    Ok((0..d)
        .map(|m| {
            // reduce m*l mod d before the float multiply to keep the phase small
            let ml = T::from_usize_lossy((m * l) % d) + T::from_usize_lossy(m) * off;
            cis(step * ml) * norm
        })
        .collect())
}

/// Source of joint outcome probabilities for the two-party scenario.
pub trait JointDistribution<T> {
    fn dim(&self) -> usize;

    /// `P(v1 under party-1 setting i, v2 under party-2 setting j)`; `i`, `j` are 1 or 2.
    fn prob(&self, i: u8, j: u8, v1: usize, v2: usize) -> T;
}

/// Quantum probabilities of a bipartite `d x d` state.
pub struct QuantumDistribution<'a, T, S> {
    state: &'a S,
    d: usize,
    // [party-1 setting][level], [party-2 setting][level]
    bras1: [Vec<Vec<C<T>>>; 2],
    bras2: [Vec<Vec<C<T>>>; 2],
}

impl<'a, T: Real, S: QuantumState<T>> QuantumDistribution<'a, T, S> {
    pub fn new(state: &'a S, d: usize) -> Result<Self> {
        check_dim(d)?;
        let dims = state.structure().dims();
        if dims != [d, d] {
            return Err(Error::DimensionMismatch { expected: d * d, found: state.total_dim() });
        }
        let table = |party: u8, setting: u8| -> Result<Vec<Vec<C<T>>>> {
            let ms = MeasurementSetting::new(party, setting, d)?;
            (0..d).map(|l| setting_vector(&ms, l)).collect()
        };
        Ok(QuantumDistribution { state, d, bras1: [table(1, 1)?, table(1, 2)?], bras2: [table(2, 1)?, table(2, 2)?] })
    }
}

impl<T: Real, S: QuantumState<T>> JointDistribution<T> for QuantumDistribution<'_, T, S> {
    fn dim(&self) -> usize {
        self.d
    }

    fn prob(&self, i: u8, j: u8, v1: usize, v2: usize) -> T {
        let a = &self.bras1[usize::from(i) - 1][v1];
        let b = &self.bras2[usize::from(j) - 1][v2];
        let joint: Vec<C<T>> = a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect();
        self.state.probability(&joint)
    }
}

/// `|(<a| (x) <b|) psi>|^2`, or its mixed-state analogue.
pub fn joint_prob<T: Real, S: QuantumState<T>>(
    state: &S,
    s1: &MeasurementSetting,
    s2: &MeasurementSetting,
    v1: usize,
    v2: usize,
) -> Result<T> {
    if s1.party != 1 || s2.party != 2 {
        return Err(Error::InvalidParameter(format!(
            "settings must belong to parties 1 and 2, got {} and {}",
            s1.party, s2.party
        )));
    }
    if s1.dim != s2.dim {
        return Err(Error::DimensionMismatch { expected: s1.dim, found: s2.dim });
    }
    let d = s1.dim;
    if state.total_dim() != d * d {
        return Err(Error::DimensionMismatch { expected: d * d, found: state.total_dim() });
    }
    let a = setting_vector::<T>(s1, v1)?;
    let b = setting_vector::<T>(s2, v2)?;
    let joint: Vec<C<T>> = a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect();
    Ok(state.probability(&joint))
}

/// Party-1 outcomes `(alpha, beta)` entering `C_m^(ij) = P(alpha, m) - P(beta, m)`.
pub fn correlator_outcomes(i: u8, j: u8, m: usize, d: usize) -> Result<(usize, usize)> {
    if m >= d {
        return Err(Error::LevelOutOfRange { level: m, dim: d });
    }
    let neg_m = (d - m) % d;
    let pair = match (i, j) {
        (1, 2) => (neg_m, (d + 1 - m) % d),
        (2, 1) => ((d - m - 1) % d, neg_m),
        (1, 1) | (2, 2) => (neg_m, (d - m - 1) % d),
        _ => return Err(Error::InvalidParameter(format!("settings ({i}, {j}) must be 1 or 2"))),
    };
    Ok(pair)
}

pub fn correlator_m<T: Real, D: JointDistribution<T>>(dist: &D, i: u8, j: u8, m: usize) -> Result<T> {
    let (alpha, beta) = correlator_outcomes(i, j, m, dist.dim())?;
    Ok(dist.prob(i, j, alpha, m) - dist.prob(i, j, beta, m))
}

/// `C^(ij) = sum_m C_m^(ij)`
pub fn correlation_function<T: Real, D: JointDistribution<T>>(dist: &D, i: u8, j: u8) -> Result<T> {
    let mut s = T::zero();
    for m in 0..dist.dim() {
        s += correlator_m(dist, i, j, m)?;
    }
    Ok(s)
}

/// `C^(11) + C^(12) + C^(21) + C^(22)` for any joint distribution.
pub fn functional_value<T: Real, D: JointDistribution<T>>(dist: &D) -> Result<T> {
    let mut s = T::zero();
    for (i, j) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        s += correlation_function(dist, i, j)?;
    }
    Ok(s)
}

pub fn quantum_value<T: Real, S: QuantumState<T>>(state: &S, d: usize) -> Result<T> {
    functional_value(&QuantumDistribution::new(state, d)?)
}

/// Number of distinct joint probabilities read by one `C^(ij)`.
pub fn detection_events(i: u8, j: u8, d: usize) -> Result<usize> {
    let mut seen = std::collections::BTreeSet::new();
    for m in 0..d {
        let (a, b) = correlator_outcomes(i, j, m, d)?;
        seen.insert((a, m));
        seen.insert((b, m));
    }
    Ok(seen.len())
}

fn csc2<T: Real>(x: T) -> T {
    let s = x.sin();
    T::one() / (s * s)
}

/// Common value of every `C_m^(ij)` on the maximally entangled state.
pub fn analytic_correlator<T: Real>(d: usize) -> Result<T> {
    check_dim(d)?;
    let df = T::from_usize_lossy(d);
    let x = T::PI() / (T::lit(4.0) * df);
    Ok((csc2(x) - csc2(T::lit(3.0) * x)) / (T::lit(2.0) * df * df * df))
}

/// `(2/d^2)(csc^2(pi/4d) - csc^2(3pi/4d))`
pub fn analytic_value<T: Real>(d: usize) -> Result<T> {
    check_dim(d)?;
    let df = T::from_usize_lossy(d);
    let x = T::PI() / (T::lit(4.0) * df);
    Ok(T::lit(2.0) * (csc2(x) - csc2(T::lit(3.0) * x)) / (df * df))
}

/// Deterministic outcomes for all four local measurements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LhvAssignment {
    /// party 1, setting 1
    pub v11: usize,
    /// party 2, setting 1
    pub v21: usize,
    /// party 1, setting 2
    pub v12: usize,
    /// party 2, setting 2
    pub v22: usize,
}

impl LhvAssignment {
    pub fn new(v11: usize, v21: usize, v12: usize, v22: usize, d: usize) -> Result<Self> {
        for v in [v11, v21, v12, v22] {
            if v >= d {
                return Err(Error::LevelOutOfRange { level: v, dim: d });
            }
        }
        Ok(LhvAssignment { v11, v21, v12, v22 })
    }

    fn party1(&self, setting: u8) -> usize {
        if setting == 1 {
            self.v11
        } else {
            self.v12
        }
    }

    fn party2(&self, setting: u8) -> usize {
        if setting == 1 {
            self.v21
        } else {
            self.v22
        }
    }
}

impl std::fmt::Display for LhvAssignment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{},{})", self.v11, self.v21, self.v12, self.v22)
    }
}

/// An assignment seen as a point-mass distribution over outcomes.
pub struct DeterministicDistribution {
    pub assignment: LhvAssignment,
    pub d: usize,
}

impl<T: Real> JointDistribution<T> for DeterministicDistribution {
    fn dim(&self) -> usize {
        self.d
    }

    fn prob(&self, i: u8, j: u8, v1: usize, v2: usize) -> T {
        if self.assignment.party1(i) == v1 && self.assignment.party2(j) == v2 {
            T::one()
        } else {
            T::zero()
        }
    }
}

fn delta(x: i64, d: usize, k: i64) -> i32 {
    i32::from(x.rem_euclid(d as i64) == k)
}

/// Closed-form value of the functional under a deterministic model.
pub fn lhv_value(a: &LhvAssignment, d: usize) -> i32 {
    let s = |x: usize, y: usize| (x + y) as i64;
    let s11 = s(a.v11, a.v21);
    let s12 = s(a.v11, a.v22);
    let s22 = s(a.v12, a.v22);
    let s21 = s(a.v12, a.v21);
    (delta(s11, d, 0) - delta(-s11, d, 1))
        + (delta(s12, d, 0) - delta(s12, d, 1))
        + (delta(s22, d, 0) - delta(-s22, d, 1))
        + (delta(-s21, d, 1) - delta(s21, d, 0))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LhvMax {
    pub max: i32,
    /// All maximizers in lexicographic `(v11, v21, v12, v22)` order.
    pub argmax: Vec<LhvAssignment>,
}

/// Exhaustive maximum of [`lhv_value`] over all `d^4` assignments.
pub fn lhv_max(d: usize) -> Result<LhvMax> {
    check_dim(d)?;
    if d > LHV_ENUMERATION_MAX_D {
        return Err(Error::EnumerationGuard { d, max: LHV_ENUMERATION_MAX_D });
    }
    let slab = |v11: usize| {
        let mut best = LhvMax { max: i32::MIN, argmax: Vec::new() };
        for v21 in 0..d {
            for v12 in 0..d {
                for v22 in 0..d {
                    let a = LhvAssignment { v11, v21, v12, v22 };
                    let v = lhv_value(&a, d);
                    if v > best.max {
                        best.max = v;
                        best.argmax.clear();
                    }
                    if v == best.max {
                        best.argmax.push(a);
                    }
                }
            }
        }
        best
    };
    let slabs: Vec<LhvMax> =
        if d > PARALLEL_ABOVE_D { (0..d).into_par_iter().map(slab).collect() } else { (0..d).map(slab).collect() };
    let max = slabs.iter().map(|s| s.max).max().expect("d >= 2");
    let argmax = slabs.into_iter().filter(|s| s.max == max).flat_map(|s| s.argmax).collect();
    Ok(LhvMax { max, argmax })
}

/// White-noise fraction below which the maximally entangled state still
/// violates the local bound of 2.
pub fn noise_threshold<T: Real>(d: usize) -> Result<T> {
    Ok(T::one() - T::lit(2.0) / analytic_value::<T>(d)?)
}

/// Noise tolerance of `(1/d) I - |psi_d><psi_d|`.
pub fn projector_witness_threshold<T: Real>(d: usize) -> Result<T> {
    check_dim(d)?;
    let df = T::from_usize_lossy(d);
    Ok(df / (df + T::one()))
}

fn chsh_term(x: usize, y: usize) -> i32 {
    delta((x + y) as i64, 2, 0) - delta((x + y) as i64, 2, 1)
}

/// Checks at `d = 2` that the functional coincides with the CHSH
/// expression on every deterministic assignment and that both peak at 2.
pub fn chsh_reduction_check() -> bool {
    let mut best = i32::MIN;
    for v11 in 0..2 {
        for v21 in 0..2 {
            for v12 in 0..2 {
                for v22 in 0..2 {
                    let a = LhvAssignment { v11, v21, v12, v22 };
                    let chsh = chsh_term(v11, v21) + chsh_term(v11, v22) + chsh_term(v12, v22) - chsh_term(v12, v21);
                    if lhv_value(&a, 2) != chsh {
                        return false;
                    }
                    best = best.max(chsh);
                }
            }
        }
    }
    best == 2
}

#[derive(Debug, Clone)]
pub struct BellReport<T> {
    pub d: usize,
    pub quantum_value: T,
    pub analytic_value: T,
    pub correlators: Vec<T>,
    pub lhv: Option<LhvMax>,
    pub noise_threshold: T,
    pub projector_threshold: T,
    pub detection_events_per_correlation: usize,
}

/// Evaluates the functional on `|psi_d>`; the exhaustive LHV search is
/// optional since it costs `d^4`.
pub fn bell_report<T: Real>(d: usize, with_lhv: bool) -> Result<BellReport<T>> {
    let psi = crate::states::max_entangled_qudit::<T>(d)?;
    let dist = QuantumDistribution::new(&psi, d)?;
    let mut correlators = Vec::with_capacity(4 * d);
    for (i, j) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        for m in 0..d {
            correlators.push(correlator_m(&dist, i, j, m)?);
        }
    }
    let quantum_value = correlators.iter().copied().sum();
    let mut events = 0;
    for (i, j) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        events = events.max(detection_events(i, j, d)?);
    }
    Ok(BellReport {
        d,
        quantum_value,
        analytic_value: analytic_value(d)?,
        correlators,
        lhv: if with_lhv { Some(lhv_max(d)?) } else { None },
        noise_threshold: noise_threshold(d)?,
        projector_threshold: projector_witness_threshold(d)?,
        detection_events_per_correlation: events,
    })
}

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("qudit dimension {d} < 2")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cr;
    use crate::states::{max_entangled_qudit, mix_white_noise};
    use crate::tensor::{DensityMatrix, PartyStructure};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn all_settings(d: usize) -> Vec<MeasurementSetting> {
        [(1, 1), (1, 2), (2, 1), (2, 2)].iter().map(|&(k, q)| MeasurementSetting::new(k, q, d).unwrap()).collect()
    }

    #[test]
    fn offsets() {
        let o = |k, q| MeasurementSetting::new(k, q, 3).unwrap().offset();
        assert_eq!(o(1, 1), Rational64::new(0, 1));
        assert_eq!(o(2, 1), Rational64::new(1, 4));
        assert_eq!(o(1, 2), Rational64::new(1, 2));
        assert_eq!(o(2, 2), Rational64::new(-1, 4));
        assert!(MeasurementSetting::new(3, 1, 3).is_err());
        assert!(MeasurementSetting::new(1, 1, 1).is_err());
    }

    #[test]
    fn setting_vector_d2() {
        let ms = MeasurementSetting::new(1, 1, 2).unwrap();
        let v = setting_vector::<f64>(&ms, 0).unwrap();
        let h = 1.0 / 2f64.sqrt();
        assert!((v[0] - cr(h)).norm() < 1e-15 && (v[1] - cr(h)).norm() < 1e-15);
        assert!(setting_vector::<f64>(&ms, 2).is_err());
    }

    #[test]
    fn setting_vectors_orthonormal_and_complete() {
        for d in 2..=16 {
            for ms in all_settings(d) {
                let vs: Vec<_> = (0..d).map(|l| setting_vector::<f64>(&ms, l).unwrap()).collect();
                for a in 0..d {
                    for b in 0..d {
                        let ip: C<f64> = vs[a].iter().zip(&vs[b]).map(|(x, y)| x.conj() * y).sum();
                        let want = if a == b { 1.0 } else { 0.0 };
                        assert!((ip - cr(want)).norm() < 1e-12, "d={d} {a} {b}");
                    }
                }
                // sum_l |l><l| = I
                for r in 0..d {
                    for c in 0..d {
                        let s: C<f64> = vs.iter().map(|v| v[r] * v[c].conj()).sum();
                        let want = if r == c { 1.0 } else { 0.0 };
                        assert!((s - cr(want)).norm() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn probabilities_sum_to_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let d = 3;
        let st = PartyStructure::uniform(2, d).unwrap();
        let psi = crate::states::random_pure::<f64, _>(&st, &mut rng);
        let s1 = MeasurementSetting::new(1, 2, d).unwrap();
        let s2 = MeasurementSetting::new(2, 1, d).unwrap();
        let mut total = 0.0;
        for a in 0..d {
            for b in 0..d {
                total += joint_prob(&psi, &s1, &s2, a, b).unwrap();
            }
        }
        assert!((total - 1.0).abs() < 1e-13);
        assert!(joint_prob(&psi, &s2, &s1, 0, 0).is_err());
    }

    #[test]
    fn maximally_mixed_is_uniform() {
        let d = 4;
        let rho = DensityMatrix::<f64>::maximally_mixed(PartyStructure::uniform(2, d).unwrap());
        let dist = QuantumDistribution::new(&rho, d).unwrap();
        for (i, j) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            for a in 0..d {
                for b in 0..d {
                    assert!((dist.prob(i, j, a, b) - 1.0 / 16.0).abs() < 1e-15);
                }
            }
        }
        assert!(quantum_value(&rho, d).unwrap().abs() < 1e-14);
    }

    #[test]
    fn d2_correlator_matches_closed_form() {
        let psi = max_entangled_qudit::<f64>(2).unwrap();
        let dist = QuantumDistribution::new(&psi, 2).unwrap();
        let pi = std::f64::consts::PI;
        let want = (1.0 / 16.0) * (1.0 / (pi / 8.0).sin().powi(2) - 1.0 / (3.0 * pi / 8.0).sin().powi(2));
        assert!((correlator_m(&dist, 1, 1, 0).unwrap() - want).abs() < 1e-14);
        assert!((want - 2f64.sqrt() / 4.0).abs() < 1e-14);
    }

    #[test]
    fn all_correlators_equal_constant() {
        for d in 2..=32 {
            let r = bell_report::<f64>(d, false).unwrap();
            let k = analytic_correlator::<f64>(d).unwrap();
            assert_eq!(r.correlators.len(), 4 * d);
            for c in &r.correlators {
                assert!((c - k).abs() < 1e-10, "d={d}");
                assert!(*c > 0.0);
            }
            assert!((r.quantum_value - r.analytic_value).abs() < 1e-9);
        }
    }

    #[test]
    fn named_quantum_values() {
        let q2 = quantum_value(&max_entangled_qudit::<f64>(2).unwrap(), 2).unwrap();
        assert!((q2 - 2.0 * 2f64.sqrt()).abs() < 1e-12);
        let q3 = quantum_value(&max_entangled_qudit::<f64>(3).unwrap(), 3).unwrap();
        assert!((q3 - 2.87293).abs() < 1e-5);
        assert!((analytic_value::<f64>(2).unwrap() - 2.0 * 2f64.sqrt()).abs() < 1e-12);
        assert!((analytic_value::<f64>(1_000_000).unwrap() - 2.88202).abs() < 1e-5);
        assert!((analytic_limit::<f64>() - 2.88202).abs() < 1e-5);
        assert!(analytic_value::<f64>(1).is_err());
    }

    #[test]
    fn analytic_value_increasing() {
        let v: Vec<f64> = (2..=100).map(|d| analytic_value(d).unwrap()).collect();
        assert!(v.windows(2).all(|w| w[1] > w[0]));
        let n: Vec<f64> = (2..=100).map(|d| noise_threshold(d).unwrap()).collect();
        assert!(n.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn thresholds() {
        assert!((noise_threshold::<f64>(2).unwrap() - (1.0 - 1.0 / 2f64.sqrt())).abs() < 1e-12);
        assert!((noise_threshold::<f64>(1_000_000).unwrap() - 0.30604).abs() < 1e-5);
        assert!((projector_witness_threshold::<f64>(2).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!((projector_witness_threshold::<f64>(10).unwrap() - 10.0 / 11.0).abs() < 1e-15);
        assert!(projector_witness_threshold::<f64>(1_000_000).unwrap() > 0.999_99);
    }

    #[test]
    fn projector_threshold_from_state() {
        // Tr[((1/d) I - |psi><psi|) rho(p)] = 1/d - (1 - p) - p/d^2 vanishes at p = d/(d+1)
        for d in 2..=6 {
            let psi = max_entangled_qudit::<f64>(d).unwrap();
            let p = projector_witness_threshold::<f64>(d).unwrap();
            let rho = mix_white_noise(&psi, p).unwrap();
            let overlap = rho.matrix().quadratic_form(psi.amplitudes()).re;
            assert!((1.0 / d as f64 - overlap).abs() < 1e-12);
        }
    }

    #[test]
    fn mixed_state_linearity() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let d = 3;
        let psi = max_entangled_qudit::<f64>(d).unwrap();
        let pure = quantum_value(&psi, d).unwrap();
        for _ in 0..20 {
            let p = rng.random_range(0.0..1.0);
            let rho = mix_white_noise(&psi, p).unwrap();
            assert!((quantum_value(&rho, d).unwrap() - (1.0 - p) * pure).abs() < 1e-12);
        }
    }

    #[test]
    fn hand_evaluated_assignments() {
        // d=2, (0,0,0,1): s11=0 (+1), s12=1 (-1), s22=1: -s22 mod 2 = 1 (-1),
        // s21=0: -s21 mod 2 = 0 (no +), s21 = 0 (-1)
        assert_eq!(lhv_value(&LhvAssignment::new(0, 0, 0, 1, 2).unwrap(), 2), -2);
        // all zero: +1 from lines one to three, -1 from line four
        for d in 2..8 {
            assert_eq!(lhv_value(&LhvAssignment::new(0, 0, 0, 0, d).unwrap(), d), 2);
        }
        assert!(LhvAssignment::new(0, 3, 0, 0, 3).is_err());
    }

    #[test]
    fn closed_form_matches_point_mass_distribution() {
        for d in 2..=5 {
            for v11 in 0..d {
                for v21 in 0..d {
                    for v12 in 0..d {
                        for v22 in 0..d {
                            let a = LhvAssignment { v11, v21, v12, v22 };
                            let via_prob: f64 =
                                functional_value(&DeterministicDistribution { assignment: a, d }).unwrap();
                            assert_eq!(via_prob, f64::from(lhv_value(&a, d)), "d={d} {a}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn lhv_bound_is_two() {
        for d in [2, 3, 4, 5, 6, 11, 12] {
            let r = lhv_max(d).unwrap();
            assert_eq!(r.max, 2, "d={d}");
            assert!(!r.argmax.is_empty());
            assert!(r.argmax.windows(2).all(|w| w[0] < w[1]));
            assert!(r.argmax.iter().all(|a| lhv_value(a, d) == 2));
        }
        assert!(lhv_max(41).is_err());
    }

    #[test]
    fn lhv_parallel_matches_serial_order() {
        let d = 11;
        let r = lhv_max(d).unwrap();
        let mut serial = Vec::new();
        for v11 in 0..d {
            for v21 in 0..d {
                for v12 in 0..d {
                    for v22 in 0..d {
                        let a = LhvAssignment { v11, v21, v12, v22 };
                        if lhv_value(&a, d) == 2 {
                            serial.push(a);
                        }
                    }
                }
            }
        }
        assert_eq!(r.argmax, serial);
    }

    #[test]
    fn chsh() {
        assert!(chsh_reduction_check());
        assert!(analytic_value::<f64>(2).unwrap() > 2.0);
    }

    #[test]
    fn detection_event_count() {
        for d in 2..=16 {
            for (i, j) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
                assert_eq!(detection_events(i, j, d).unwrap(), 2 * d);
            }
        }
    }

    #[test]
    fn wrong_dimension_rejected() {
        let psi = max_entangled_qudit::<f64>(3).unwrap();
        assert!(quantum_value(&psi, 2).is_err());
    }
}
