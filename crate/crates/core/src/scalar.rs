use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Real scalar the whole crate is generic over (`f32` or `f64`).
///
/// Carries the default tolerances for that precision so callers do not
/// have to thread precision-dependent constants around.
pub trait Real: Float + FloatConst + FromPrimitive + NumAssign + Sum + Debug + Display + Send + Sync + 'static {
    /// Hermiticity and normalization checks.
    fn structural_tol() -> Self;
    /// Trace and positivity checks on density matrices.
    fn trace_tol() -> Self;
    /// Eigenvalue-based comparisons, relative to the spectral norm.
    fn spectral_tol() -> Self;

    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn from_usize_lossy(x: usize) -> Self {
        Self::from_usize(x).expect("index representable in scalar type")
    }
}

impl Real for f64 {
    fn structural_tol() -> Self {
        1e-12
    }
    fn trace_tol() -> Self {
        1e-10
    }
    fn spectral_tol() -> Self {
        1e-9
    }
}

impl Real for f32 {
    fn structural_tol() -> Self {
        1e-5
    }
    fn trace_tol() -> Self {
        1e-4
    }
    fn spectral_tol() -> Self {
        1e-4
    }
}

pub type C<T> = Complex<T>;

#[inline]
pub(crate) fn c<T: Real>(re: T, im: T) -> C<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn cr<T: Real>(re: T) -> C<T> {
    Complex::new(re, T::zero())
}

/// `e^{i angle}`
#[inline]
pub(crate) fn cis<T: Real>(angle: T) -> C<T> {
    Complex::new(angle.cos(), angle.sin())
}
