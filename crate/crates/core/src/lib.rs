//! Coherence, nonclassicality and metrological resolution for
//! finite-dimensional density matrices.
//!
//! All states live in a fixed orthonormal basis `{|j⟩}` selected by a
//! [`BasisObservable`]. The modules build on each other:
//!
//! * [`state`]: density matrices, observables, unitary signals.
//! * [`coherence`]: off-diagonal terms, Hilbert-Schmidt coherence, coherent bases.
//! * [`nonclassicality`]: two-level Pauli operators and the negativity witness.
//! * [`phase`]: multi-phase and single-phase coherence distributions.
//! * [`metrology`]: resolution figures for signals `U(λ) = exp(-iλg)`.
//! * [`cli`]: scenario runner behind the `qcohere` binary.

pub mod cli;
pub mod coherence;
pub mod error;
pub mod io;
pub mod metrology;
pub mod nonclassicality;
pub mod oracle;
pub mod phase;
pub mod state;
pub mod tolerance;

pub use num_complex::Complex64;

pub use coherence::{
    coherence_profile, commutator_norm, find_coherent_basis, hilbert_schmidt_coherence,
    CoherencePair, CoherenceProfile, CoherentBasis,
};
pub use error::{Error, Result};
pub use metrology::{
    density_matrix_distance, small_signal_quadratic, statistical_distance, statistics_derivative,
    uncertainty_bound_check, wiener_kintchine_resolution, BoundReport, DistanceReport, Povm,
    ResolutionReport,
};
pub use nonclassicality::{
    joint_distribution, pauli_subspace, witness_search, GammaTriple, JointDistribution,
    PauliSubspace, WitnessCertificate,
};
pub use phase::{
    covariance_check, moment, multi_phase_distribution, renyi_integral, single_phase_distribution,
    susskind_glogower_moment, MultiPhaseDistribution, SinglePhaseDistribution,
};
pub use state::{
    evolve, random_basis, random_state, validate_state, BasisObservable, DensityMatrix, Tolerances,
    UnitarySignal, ValidationReport,
};

/// Dense complex matrix used throughout the crate.
pub type CMatrix = nalgebra::DMatrix<Complex64>;
/// Dense complex column vector.
pub type CVector = nalgebra::DVector<Complex64>;
