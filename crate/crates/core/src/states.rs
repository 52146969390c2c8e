//! Target states and the white-noise channel.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::scalar::{c, cis, cr, Real, C};
use crate::tensor::{Bipartition, CMatrix, DensityMatrix, PartyStructure, PureState};

/// Angles of the generalized four-qubit GHZ state.
///
/// `theta` is accepted on the whole open interval `(0, pi/2)` so that rows
/// with `theta > pi/4` can be built; `phi` lies in `[0, pi/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GhzParams<T> {
    theta: T,
    phi: T,
}

impl<T: Real> GhzParams<T> {
    pub fn new(theta: T, phi: T) -> Result<Self> {
        let half_pi = T::FRAC_PI_2();
        if !(theta > T::zero() && theta < half_pi) {
            return Err(Error::InvalidParameter(format!("theta = {theta} outside (0, pi/2)")));
        }
        if !(phi >= T::zero() && phi < half_pi) {
            return Err(Error::InvalidParameter(format!("phi = {phi} outside [0, pi/2)")));
        }
        Ok(GhzParams { theta, phi })
    }

    pub fn theta(&self) -> T {
        self.theta
    }

    pub fn phi(&self) -> T {
        self.phi
    }

    /// Overlap of the state with the closest biseparable state:
    /// `cos^2 theta` below `pi/4`, `sin^2 theta` above.
    pub fn projector_alpha(&self) -> T {
        let (s, c) = self.theta.sin_cos();
        (c * c).max(s * s)
    }
}

/// `cos(theta)|0000> + e^{i phi} sin(theta)|1111>`
pub fn ghz4<T: Real>(params: GhzParams<T>) -> PureState<T> {
    let mut amps = vec![cr(T::zero()); 16];
    amps[0] = cr(params.theta.cos());
    amps[15] = cis(params.phi) * params.theta.sin();
    PureState::new(amps, PartyStructure::qubits(4)).expect("ghz4 is normalized")
}

/// Four-qubit singlet:
/// `(|0011> + |1100> - (|0110> + |1001> + |0101> + |1010>)/2) / sqrt 3`.
pub fn singlet4<T: Real>() -> PureState<T> {
    let a = T::one() / T::lit(3.0).sqrt();
    let b = -a / T::lit(2.0);
    let mut amps = vec![cr(T::zero()); 16];
    for idx in [0b0011, 0b1100] {
        amps[idx] = cr(a);
    }
    for idx in [0b0110, 0b1001, 0b0101, 0b1010] {
        amps[idx] = cr(b);
    }
    PureState::new(amps, PartyStructure::qubits(4)).expect("singlet is normalized")
}

/// Three ququarts, `(1/2) sum_l |l l l>`.
pub fn ghz_4x3<T: Real>() -> PureState<T> {
    let mut amps = vec![cr(T::zero()); 64];
    for l in 0..4 {
        amps[l * 16 + l * 4 + l] = cr(T::lit(0.5));
    }
    PureState::new(amps, PartyStructure::uniform(3, 4).expect("valid")).expect("normalized")
}

/// `(1/sqrt d) sum_l |l l>`
pub fn max_entangled_qudit<T: Real>(d: usize) -> Result<PureState<T>> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!("qudit dimension {d} < 2")));
    }
    let a = T::one() / T::from_usize_lossy(d).sqrt();
    let mut amps = vec![cr(T::zero()); d * d];
    for l in 0..d {
        amps[l * d + l] = cr(a);
    }
    PureState::new(amps, PartyStructure::uniform(2, d)?)
}

/// `p I/dim + (1 - p)|s><s|`
pub fn mix_white_noise<T: Real>(state: &PureState<T>, p: T) -> Result<DensityMatrix<T>> {
    if !(p >= T::zero() && p <= T::one()) {
        return Err(Error::InvalidParameter(format!("noise fraction {p} outside [0, 1]")));
    }
    let dim = state.dim();
    let amps = state.amplitudes();
    let floor = p / T::from_usize_lossy(dim);
    let m = CMatrix::from_fn(dim, |i, j| {
        let pure = amps[i] * amps[j].conj() * (T::one() - p);
        if i == j {
            pure + cr(floor)
        } else {
            pure
        }
    });
    DensityMatrix::new(m, state.structure().clone())
}

/// Haar-distributed vector of length `dim` (normalized complex Gaussian).
pub fn random_vector<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<C<T>> {
    loop {
        let v: Vec<C<T>> = (0..dim)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                c(T::lit(re), T::lit(im))
            })
            .collect();
        let n = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if n > T::lit(1e-6) {
            return v.into_iter().map(|z| z / n).collect();
        }
    }
}

pub fn random_pure<T: Real, R: Rng + ?Sized>(structure: &PartyStructure, rng: &mut R) -> PureState<T> {
    PureState::normalized(random_vector(structure.total_dim(), rng), structure.clone())
        .expect("random vector is non-zero")
}

/// Random state that factorizes across `cut`; each side is itself Haar
/// random, so it is generally entangled within a side.
pub fn random_product_across<T: Real, R: Rng + ?Sized>(
    structure: &PartyStructure,
    cut: &Bipartition,
    rng: &mut R,
) -> PureState<T> {
    let a = random_vector(cut.dim_a(), rng);
    let b = random_vector(cut.dim_b(), rng);
    PureState::product_across(structure, cut, &a, &b).expect("dimensions come from the cut")
}

/// Fully product state with independent Haar-random local factors.
pub fn random_fully_product<T: Real, R: Rng + ?Sized>(structure: &PartyStructure, rng: &mut R) -> PureState<T> {
    let mut amps = vec![cr(T::one())];
    for &d in structure.dims() {
        let local = random_vector::<T, _>(d, rng);
        amps = amps.iter().flat_map(|a| local.iter().map(move |b| a * b)).collect();
    }
    PureState::normalized(amps, structure.clone()).expect("non-zero")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{expectation, min_eigenvalue, schmidt_max_sq, HermitianOperator};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    #[test]
    fn ghz4_symmetric_case() {
        let s = ghz4(GhzParams::new(PI / 4.0, 0.0).unwrap());
        let h = 1.0 / 2f64.sqrt();
        assert!((s.amplitude(0).re - h).abs() < 1e-15);
        assert!((s.amplitude(15).re - h).abs() < 1e-15);
        assert!(s.amplitudes()[1..15].iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn ghz4_phase() {
        let s = ghz4(GhzParams::new(PI / 4.0, PI / 6.0).unwrap());
        let h = 1.0 / 2f64.sqrt();
        let want = c((PI / 6.0).cos() * h, (PI / 6.0).sin() * h);
        assert!((s.amplitude(15) - want).norm() < 1e-15);
    }

    #[test]
    fn ghz_params_ranges() {
        assert!(GhzParams::new(0.0, 0.0).is_err());
        assert!(GhzParams::new(PI / 2.0, 0.0).is_err());
        assert!(GhzParams::new(0.3, PI / 2.0).is_err());
        assert!(GhzParams::new(0.3, -0.1).is_err());
        assert!(GhzParams::new(PI / 3.7, PI / 9.0).is_ok());
    }

    #[test]
    fn ghz4_norm_random_params() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let t = rng.random_range(1e-6..PI / 2.0 - 1e-6);
            let p = rng.random_range(0.0..PI / 2.0 - 1e-6);
            let s = ghz4(GhzParams::new(t, p).unwrap());
            assert!((s.norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn singlet_amplitudes() {
        let s = singlet4::<f64>();
        assert!((s.norm() - 1.0).abs() < 1e-15);
        assert!((s.amplitude(0b0101).re + 1.0 / (2.0 * 3f64.sqrt())).abs() < 1e-15);
        assert!((s.amplitude(0b0011).re - 1.0 / 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn ghz_4x3_amplitudes() {
        let s = ghz_4x3::<f64>();
        assert_eq!(s.amplitude(2 * 16 + 2 * 4 + 2), cr(0.5));
        assert!((s.norm() - 1.0).abs() < 1e-15);
        assert!((schmidt_max_sq(&s, &[0]).unwrap() - 0.25).abs() < 1e-14);
    }

    #[test]
    fn qudit_state() {
        assert!(max_entangled_qudit::<f64>(1).is_err());
        let b = max_entangled_qudit::<f64>(2).unwrap();
        let h = 1.0 / 2f64.sqrt();
        assert!((b.amplitude(0).re - h).abs() < 1e-15 && (b.amplitude(3).re - h).abs() < 1e-15);
        let t = max_entangled_qudit::<f64>(3).unwrap();
        for l in 0..3 {
            assert!((t.amplitude(4 * l).re - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        }
        for d in 2..=32 {
            assert!((max_entangled_qudit::<f64>(d).unwrap().norm() - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn white_noise_endpoints() {
        let s = singlet4::<f64>();
        let pure = mix_white_noise(&s, 0.0).unwrap();
        assert!(pure.matrix().max_abs_diff(s.projector().matrix()) < 1e-15);
        let mixed = mix_white_noise(&s, 1.0).unwrap();
        assert!(mixed.matrix().max_abs_diff(&CMatrix::identity(16).scale(1.0 / 16.0)) < 1e-15);
        assert!(mix_white_noise(&s, 1.5).is_err());
        assert!(mix_white_noise(&s, -0.1).is_err());
    }

    #[test]
    fn white_noise_is_a_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s = ghz_4x3::<f64>();
        for _ in 0..10 {
            let p = rng.random_range(0.0..1.0);
            let rho = mix_white_noise(&s, p).unwrap();
            assert!((rho.matrix().trace().re - 1.0).abs() < 1e-12);
            let op = HermitianOperator::new(rho.matrix().clone(), rho.structure().clone()).unwrap();
            assert!(min_eigenvalue(&op).unwrap() >= -1e-12);
            let id = HermitianOperator::identity(rho.structure().clone());
            assert!((expectation(&id, &rho).unwrap() - 1.0).abs() < 1e-12);
        }
    }
}
