//! Witness assembly, dominance against projector witnesses, white-noise
//! tolerance, and seesaw lower bounds on biseparable maxima.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::{cr, Real, C};
use crate::states::{random_product_across, random_vector};
use crate::tensor::{
    eigh, expectation, schmidt_max_sq_cut, Bipartition, CMatrix, HermitianOperator, PureState, QuantumState,
};

/// `alpha * I - C`; negative expectation flags genuine multipartite entanglement.
#[derive(Debug, Clone)]
pub struct Witness<T> {
    pub alpha: T,
    pub c_op: HermitianOperator<T>,
    pub label: String,
}

pub fn make_witness<T: Real>(alpha: T, c_op: HermitianOperator<T>, label: impl Into<String>) -> Result<Witness<T>> {
    if !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!("witness constant {alpha} is not finite")));
    }
    Ok(Witness { alpha, c_op, label: label.into() })
}

impl<T: Real> Witness<T> {
    pub fn operator(&self) -> HermitianOperator<T> {
        self.c_op.scaled(-T::one()).shifted(self.alpha)
    }

    /// `Tr(W s) = alpha - <C>_s`
    pub fn value<S: QuantumState<T> + ?Sized>(&self, state: &S) -> Result<T> {
        Ok(self.alpha - expectation(&self.c_op, state)?)
    }

    pub fn detects<S: QuantumState<T> + ?Sized>(&self, state: &S) -> Result<bool> {
        Ok(self.value(state)? < T::zero())
    }

    /// `Tr(W rho(p))` for `rho(p) = p I/dim + (1-p)|t><t|`, via linearity.
    pub fn noisy_value(&self, target: &PureState<T>, p: T) -> Result<T> {
        let pure = expectation(&self.c_op, target)?;
        let flat = self.c_op.trace() / T::from_usize_lossy(self.c_op.dim());
        Ok(self.alpha - ((T::one() - p) * pure + p * flat))
    }
}

/// `alpha_p * I - |t><t|` with `alpha_p` the largest squared overlap of the
/// target with a state that is product across some bipartition.
#[derive(Debug, Clone)]
pub struct ProjectorWitness<T> {
    pub alpha_p: T,
    pub target: PureState<T>,
    /// Side (containing party 0) of a bipartition attaining `alpha_p`.
    pub best_cut: Vec<usize>,
}

impl<T: Real> ProjectorWitness<T> {
    pub fn operator(&self) -> HermitianOperator<T> {
        self.target.projector().scaled(-T::one()).shifted(self.alpha_p)
    }
}

/// Maximizes the squared top Schmidt coefficient over all bipartitions.
pub fn projector_witness<T: Real>(target: &PureState<T>) -> Result<ProjectorWitness<T>> {
    let cuts = target.structure().all_bipartitions();
    if cuts.is_empty() {
        return Err(Error::InvalidBipartition("projector witness needs at least two parties".into()));
    }
    let mut best: Option<(T, &Bipartition)> = None;
    for cut in &cuts {
        let v = schmidt_max_sq_cut(target, cut)?;
        if best.is_none_or(|(b, _)| v > b) {
            best = Some((v, cut));
        }
    }
    let (alpha_p, cut) = best.expect("non-empty");
    Ok(ProjectorWitness { alpha_p, target: target.clone(), best_cut: cut.side_a().to_vec() })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DominanceCertificate<T> {
    pub gamma: T,
    pub min_eig: T,
    /// Smallest accepted eigenvalue: `-tol * ||W||`.
    pub threshold: T,
    pub passed: bool,
}

/// Checks `W - gamma W_p >= 0` up to `tol` relative to the spectral norm of `W`.
pub fn verify_dominance<T: Real>(
    w: &Witness<T>,
    wp: &ProjectorWitness<T>,
    gamma: T,
    tol: T,
) -> Result<DominanceCertificate<T>> {
    let wop = w.operator();
    let diff = wop.checked_sub(&wp.operator().scaled(gamma))?;
    let min_eig = eigh(diff.matrix())?.min();
    let threshold = -tol * wop.spectral_norm()?;
    Ok(DominanceCertificate { gamma, min_eig, threshold, passed: min_eig >= threshold })
}

/// Largest white-noise fraction for which the witness still fires on the
/// noisy target. Exact root of the affine equation
/// `alpha = p Tr(C)/dim + (1 - p) <C>_target`.
///
/// A value `>= 1` means the witness fires even on the maximally mixed state.
pub fn noise_tolerance<T: Real>(w: &Witness<T>, target: &PureState<T>) -> Result<T> {
    let pure = expectation(&w.c_op, target)?;
    if pure <= w.alpha {
        return Err(Error::WitnessNeverFires {
            expectation: pure.to_f64().unwrap_or(f64::NAN),
            alpha: w.alpha.to_f64().unwrap_or(f64::NAN),
        });
    }
    let flat = w.c_op.trace() / T::from_usize_lossy(w.c_op.dim());
    Ok((pure - w.alpha) / (pure - flat))
}

/// Objective value and the two side vectors of one seesaw run.
type SeesawRun<T> = (T, Vec<C<T>>, Vec<C<T>>);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeesawOptions {
    pub restarts: usize,
    pub iters: usize,
    pub seed: u64,
    /// Stop a run once the objective changes by less than this.
    pub convergence: f64,
}

impl Default for SeesawOptions {
    fn default() -> Self {
        SeesawOptions { restarts: 200, iters: 500, seed: 0, convergence: 1e-10 }
    }
}

#[derive(Debug, Clone)]
pub struct BiseparableMax<T> {
    pub value: T,
    /// Side of the maximizing bipartition containing party 0.
    pub cut: Vec<usize>,
    pub cut_index: usize,
    pub restart: usize,
    pub argmax: PureState<T>,
}

/// Lower bound on `max <chi|op|chi>` over states product across some
/// bipartition, by alternating top-eigenvector updates on each side.
///
/// Every (bipartition, restart) run draws from its own ChaCha stream, and
/// runs are merged by maximum value with ties going to the lower
/// (bipartition, restart) index, so results do not depend on scheduling.
pub fn biseparable_max<T: Real>(op: &HermitianOperator<T>, opts: SeesawOptions) -> Result<BiseparableMax<T>> {
    let cuts = op.structure().all_bipartitions();
    if cuts.is_empty() {
        return Err(Error::InvalidBipartition("biseparable maximum needs at least two parties".into()));
    }
    let restarts = opts.restarts.max(1);
    let tasks: Vec<(usize, usize)> = (0..cuts.len()).flat_map(|c| (0..restarts).map(move |r| (c, r))).collect();
    let runs: Vec<Result<SeesawRun<T>>> = tasks
        .par_iter()
        .map(|&(ci, r)| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            rng.set_stream((ci * restarts + r) as u64);
            seesaw_run(op.matrix(), &cuts[ci], opts, &mut rng)
        })
        .collect();

    let mut best: Option<(SeesawRun<T>, usize, usize)> = None;
    for (&(ci, r), run) in tasks.iter().zip(runs) {
        let run = run?;
        if best.as_ref().is_none_or(|((bv, ..), ..)| run.0 > *bv) {
            best = Some((run, ci, r));
        }
    }
    let ((value, a, b), ci, restart) = best.expect("at least one run");
    let argmax = PureState::product_across(op.structure(), &cuts[ci], &a, &b)?;
    Ok(BiseparableMax { value, cut: cuts[ci].side_a().to_vec(), cut_index: ci, restart, argmax })
}

fn seesaw_run<T: Real>(
    op: &CMatrix<T>,
    cut: &Bipartition,
    opts: SeesawOptions,
    rng: &mut ChaCha8Rng,
) -> Result<SeesawRun<T>> {
    let mut b = random_vector::<T, _>(cut.dim_b(), rng);
    let mut a = random_vector::<T, _>(cut.dim_a(), rng);
    let mut value = T::neg_infinity();
    let tol = T::lit(opts.convergence);
    for _ in 0..opts.iters.max(1) {
        let ea = eigh(&contract_b(op, cut, &b))?;
        a = ea.top_vector();
        let eb = eigh(&contract_a(op, cut, &a))?;
        b = eb.top_vector();
        let next = eb.max();
        let done = (next - value).abs() < tol;
        value = next;
        if done {
            break;
        }
    }
    Ok((value, a, b))
}

/// `(I (x) <b|) op (I (x) |b>)` on side A.
fn contract_b<T: Real>(op: &CMatrix<T>, cut: &Bipartition, b: &[C<T>]) -> CMatrix<T> {
    let (da, db) = (cut.dim_a(), cut.dim_b());
    CMatrix::from_fn(da, |i, k| {
        let mut acc = cr(T::zero());
        for j in 0..db {
            let row = cut.flat_index(i, j);
            let mut inner = cr(T::zero());
            for l in 0..db {
                inner += op[(row, cut.flat_index(k, l))] * b[l];
            }
            acc += b[j].conj() * inner;
        }
        acc
    })
}

/// `(<a| (x) I) op (|a> (x) I)` on side B.
fn contract_a<T: Real>(op: &CMatrix<T>, cut: &Bipartition, a: &[C<T>]) -> CMatrix<T> {
    let (da, db) = (cut.dim_a(), cut.dim_b());
    CMatrix::from_fn(db, |j, l| {
        let mut acc = cr(T::zero());
        for i in 0..da {
            let row = cut.flat_index(i, j);
            let mut inner = cr(T::zero());
            for k in 0..da {
                inner += op[(row, cut.flat_index(k, l))] * a[k];
            }
            acc += a[i].conj() * inner;
        }
        acc
    })
}

/// Best expectation over `samples` random states, each product across a
/// uniformly chosen bipartition. A crude lower bound for cross-checking
/// [`biseparable_max`].
pub fn random_biseparable_value<T: Real>(op: &HermitianOperator<T>, samples: usize, seed: u64) -> Result<T> {
    let cuts = op.structure().all_bipartitions();
    if cuts.is_empty() {
        return Err(Error::InvalidBipartition("needs at least two parties".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = T::neg_infinity();
    for _ in 0..samples {
        let cut = &cuts[rng.random_range(0..cuts.len())];
        let s = random_product_across::<T, _>(op.structure(), cut, &mut rng);
        best = best.max(expectation(op, &s)?);
    }
    Ok(best)
}
