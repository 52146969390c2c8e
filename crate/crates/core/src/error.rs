use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid party structure: {0}")]
    InvalidStructure(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("state is not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },

    #[error("operator is not Hermitian (max |A - A^H| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("expectation value has imaginary residue {residue:e}; operator is not Hermitian")]
    ImaginaryResidue { residue: f64 },

    #[error("Hermitian eigensolver did not converge after {sweeps} sweeps")]
    NonConvergence { sweeps: usize },

    #[error("invalid bipartition: {0}")]
    InvalidBipartition(String),

    #[error("party index {party} out of range for {parties} parties")]
    PartyOutOfRange { party: usize, parties: usize },

    #[error("level {level} out of range for local dimension {dim}")]
    LevelOutOfRange { level: usize, dim: usize },

    #[error("parameter out of range: {0}")]
    InvalidParameter(String),

    #[error("witness never fires on its target: expectation {expectation} <= alpha {alpha}")]
    WitnessNeverFires { expectation: f64, alpha: f64 },

    #[error("exhaustive LHV enumeration refused for d = {d} (guard is d <= {max})")]
    EnumerationGuard { d: usize, max: usize },
}

impl Error {
    /// Failures of the numerics themselves rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NonConvergence { .. } | Error::ImaginaryResidue { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
