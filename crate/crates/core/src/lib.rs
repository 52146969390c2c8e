//! Correlator-based entanglement witnesses for multipartite states and a
//! two-qudit Bell functional, with the numerical checks that back them.
//!
//! The numerical core is generic over [`scalar::Real`] (`f32` or `f64`).
//! The aliases below fix the scalar for the common case; the `*32`
//! variants are the single-precision counterparts.
//!
//! Party 0 is the leftmost, most significant tensor factor.

pub mod bell;
pub mod correlators;
pub mod error;
pub mod report;
pub mod scalar;
pub mod states;
pub mod tensor;
pub mod witnesses;

pub use error::{Error, Result};
pub use tensor::{Kron, PartyStructure, QuantumState};

pub type CMatrix = tensor::CMatrix<f64>;
pub type PureState = tensor::PureState<f64>;
pub type DensityMatrix = tensor::DensityMatrix<f64>;
pub type HermitianOperator = tensor::HermitianOperator<f64>;
pub type Witness = witnesses::Witness<f64>;
pub type ProjectorWitness = witnesses::ProjectorWitness<f64>;
pub type BellReport = bell::BellReport<f64>;

pub type CMatrix32 = tensor::CMatrix<f32>;
pub type PureState32 = tensor::PureState<f32>;
pub type DensityMatrix32 = tensor::DensityMatrix<f32>;
pub type HermitianOperator32 = tensor::HermitianOperator<f32>;
pub type Witness32 = witnesses::Witness<f32>;
pub type ProjectorWitness32 = witnesses::ProjectorWitness<f32>;
pub type BellReport32 = bell::BellReport<f32>;
