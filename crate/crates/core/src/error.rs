use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (max |rho_jk - conj(rho_kj)| = {max_deviation:e})")]
    NonHermitian { max_deviation: f64 },

    #[error("trace is not one (|tr(rho) - 1| = {deviation:e})")]
    TraceNotOne { deviation: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue = {min_eigenvalue:e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("basis is not unitary (max |B^dagger B - I| = {max_deviation:e})")]
    NonUnitaryBasis { max_deviation: f64 },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid rank {rank} for dimension {dim}")]
    InvalidRank { dim: usize, rank: usize },

    #[error("dimension must be positive")]
    ZeroDimension,

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("level indices must differ (got {0} twice)")]
    EqualIndices(usize),

    #[error("gamma_y and gamma_z must be nonzero (got {gamma_y}, {gamma_z})")]
    ZeroGammaDenominator { gamma_y: f64, gamma_z: f64 },

    #[error("gamma triple outside the unit ball (squared norm {norm_sq})")]
    GammaOutsideBall { norm_sq: f64 },

    #[error("shift tau = {tau} out of range for dimension {dim}")]
    TauOutOfRange { tau: i64, dim: usize },

    #[error("POVM has no idempotency factor eta")]
    EtaMissing,

    #[error("invalid POVM: {0}")]
    InvalidPovm(String),

    #[error("phase distribution has zero squared integral")]
    DegenerateDistribution,

    #[error("invalid state: {0}")]
    InvalidState(String),
}

pub type Result<T> = std::result::Result<T, Error>;
