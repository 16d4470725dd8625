//! Numerical tolerances shared across the crate.
//!
//! Dimensions are desk scale (N <= 64), so every check is tight.

/// Entrywise Hermiticity: `|rho_jk - conj(rho_kj)|`.
pub const HERMITIAN: f64 = 1e-9;

/// `|tr(rho) - 1|`.
pub const TRACE: f64 = 1e-9;

/// Orthonormality of basis columns and of `U U^dagger`.
pub const UNITARY: f64 = 1e-9;

/// Smallest admissible eigenvalue is `-PSD`. Violations below this are
/// clamped to zero and the state renormalized.
pub const PSD: f64 = 1e-8;

/// Default threshold for `find_coherent_basis`.
pub const COHERENT_BASIS_EPS: f64 = 1e-10;

/// Coherence moduli at or below this are treated as zero by the witness.
pub const WITNESS: f64 = 1e-9;

/// Lower bound on `gamma_y`, `gamma_z` used by the witness schedule.
pub const GAMMA_FLOOR: f64 = 1e-6;

/// Slack allowed on the unit-ball constraint for the gamma triple.
pub const GAMMA_BALL: f64 = 1e-12;

/// POVM completeness and idempotency checks.
pub const POVM: f64 = 1e-9;

/// Guard on the denominator `eta - sum_mu p_mu^2` of the variance bound.
pub const BOUND_DENOMINATOR: f64 = 1e-12;

/// Slack when deciding whether the variance bound holds.
pub const BOUND_SLACK: f64 = 1e-10;

/// `|Gamma(tau)|` below this (tau != 0) marks a flat single-phase distribution.
pub const FLAT: f64 = 1e-12;
