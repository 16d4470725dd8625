//! The coherence observable and its phase distributions.
//!
//! Unnormalized phase states `|𝛗⟩ = sum_j e^{i phi_j} |j⟩` give the POVM
//! `Δ(𝛗) = |𝛗⟩⟨𝛗|` and the multi-phase distribution
//!
//! ```text
//! P(𝛗) = ⟨𝛗|rho|𝛗⟩ = 1 + sum_{j != k} e^{i(phi_k - phi_j)} ⟨j|rho|k⟩
//! ```
//!
//! normalized under `d𝛗 = prod_j dphi_j / (2 pi)^N`. Locking `phi_j = j phi`
//! yields the single-phase distribution
//!
//! ```text
//! P(phi) = (1 / 2 pi) ⟨phi|rho|phi⟩ = sum_tau Gamma(tau) e^{-i tau phi}
//! ```
//!
//! normalized under plain `dphi` over `[0, 2 pi)`. The two measures differ by
//! the factor `2 pi`; both are kept as written.
//!
//! Both distributions are trigonometric polynomials, so every integral here
//! is evaluated exactly from Fourier coefficients.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::{check_dim, check_index, evolve, BasisObservable, DensityMatrix, UnitarySignal};
use crate::{CMatrix, CVector};

/// `P(𝛗)` stored through its coherence coefficients; the constant term is 1.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiPhaseDistribution {
    dim: usize,
    /// `coeffs[(j, k)] = ⟨j|rho|k⟩` for `j != k`, zero on the diagonal.
    coeffs: CMatrix,
}

impl MultiPhaseDistribution {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coefficients(&self) -> &CMatrix {
        &self.coeffs
    }

    pub fn coefficient(&self, j: usize, k: usize) -> Complex64 {
        self.coeffs[(j, k)]
    }

    /// `P(𝛗)` at the phase vector `phases` (length `N`).
    pub fn evaluate(&self, phases: &[f64]) -> Result<f64> {
        check_dim(self.dim, phases.len())?;
        let mut total = 1.0;
        for j in 0..self.dim {
            for k in 0..self.dim {
                if j != k {
                    let e = Complex64::from_polar(1.0, phases[k] - phases[j]);
                    total += (e * self.coeffs[(j, k)]).re;
                }
            }
        }
        Ok(total)
    }
}

/// `|𝛗⟩` in basis coordinates.
pub fn phase_state(phases: &[f64]) -> CVector {
    CVector::from_iterator(
        phases.len(),
        phases.iter().map(|&p| Complex64::from_polar(1.0, p)),
    )
}

/// `|⟨j|𝛗⟩|`, identically one.
pub fn phase_state_overlap(phases: &[f64], j: usize) -> Result<f64> {
    check_index(j, phases.len())?;
    Ok(phase_state(phases)[j].norm())
}

/// Multi-phase distribution of `rho` relative to `observable`.
pub fn multi_phase_distribution(
    rho: &DensityMatrix,
    observable: &BasisObservable,
) -> Result<MultiPhaseDistribution> {
    let mut coeffs = rho.in_basis(observable)?;
    for j in 0..coeffs.nrows() {
        coeffs[(j, j)] = Complex64::new(0.0, 0.0);
    }
    Ok(MultiPhaseDistribution {
        dim: rho.dim(),
        coeffs,
    })
}

/// `∫ d𝛗 e^{i(phi_j - phi_k)} P(𝛗)`.
///
/// Only the `e^{i(phi_k - phi_j)}` term of `P` survives the integral, so the
/// moment is its coefficient `⟨j|rho|k⟩`.
pub fn moment(dist: &MultiPhaseDistribution, j: usize, k: usize) -> Result<Complex64> {
    check_index(j, dist.dim)?;
    check_index(k, dist.dim)?;
    if j == k {
        return Err(Error::EqualIndices(j));
    }
    Ok(dist.coeffs[(j, k)])
}

/// `∫ d𝛗 P²(𝛗) = 1 + C_HS`.
///
/// Expanding `P²` over `(j, k, l, m)` only the index patterns `k = j, m = l`
/// (the constant term squared) and `k = l, m = j` with `j != k` survive.
pub fn renyi_integral(dist: &MultiPhaseDistribution) -> f64 {
    let mut cross = Complex64::new(0.0, 0.0);
    for j in 0..dist.dim {
        for k in 0..dist.dim {
            if j != k {
                cross += dist.coeffs[(j, k)] * dist.coeffs[(k, j)];
            }
        }
    }
    1.0 + cross.re
}

/// Evaluates property iv of the coherence observable both ways.
///
/// Returns `(P(𝛗; U rho U^dagger), P(𝛗 + λ e_j; rho))` with
/// `U = exp(-iλ|j⟩⟨j|)`. The two agree for every input.
pub fn covariance_check(
    rho: &DensityMatrix,
    observable: &BasisObservable,
    j: usize,
    lambda: f64,
    phases: &[f64],
) -> Result<(f64, f64)> {
    let n = observable.dim();
    check_index(j, n)?;
    check_dim(n, phases.len())?;
    let mut projector = vec![0.0; n];
    projector[j] = 1.0;
    let generator = observable.clone().with_eigenvalues(projector)?;
    let shifted_state = evolve(rho, &UnitarySignal::new(generator, lambda))?;
    let lhs = multi_phase_distribution(&shifted_state, observable)?.evaluate(phases)?;

    let mut shifted_phases = phases.to_vec();
    shifted_phases[j] += lambda;
    let rhs = multi_phase_distribution(rho, observable)?.evaluate(&shifted_phases)?;
    Ok((lhs, rhs))
}

/// `P(phi)` through the mutual coherence function `Gamma(tau)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SinglePhaseDistribution {
    dim: usize,
    /// `Gamma(tau)` for `tau = -(N-1), ..., N-1`.
    gammas: Vec<Complex64>,
}

impl SinglePhaseDistribution {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_tau(&self) -> i64 {
        self.dim as i64 - 1
    }

    /// `Gamma(tau)`; zero for `|tau| >= N`.
    pub fn gamma(&self, tau: i64) -> Complex64 {
        if tau.abs() > self.max_tau() {
            return Complex64::new(0.0, 0.0);
        }
        self.gammas[(tau + self.max_tau()) as usize]
    }

    /// `(tau, Gamma(tau))` in increasing `tau`.
    pub fn gammas(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let offset = self.max_tau();
        self.gammas
            .iter()
            .enumerate()
            .map(move |(i, &g)| (i as i64 - offset, g))
    }

    /// `P(phi) = sum_tau Gamma(tau) e^{-i tau phi}`.
    pub fn evaluate(&self, phi: f64) -> f64 {
        self.gammas()
            .map(|(tau, g)| (g * Complex64::from_polar(1.0, -(tau as f64) * phi)).re)
            .sum()
    }

    /// `∫_0^{2 pi} P²(phi) dphi = 2 pi sum_tau Gamma(tau) Gamma(-tau)`.
    pub fn integral_p2(&self) -> f64 {
        let s: Complex64 = self.gammas().map(|(tau, g)| g * self.gamma(-tau)).sum();
        TAU * s.re
    }

    /// `2 pi sum_tau |Gamma(tau)|²`.
    pub fn coherence_area(&self) -> f64 {
        TAU * self.gammas.iter().map(|g| g.norm_sqr()).sum::<f64>()
    }
}

/// `Gamma(tau) = (1 / 2 pi) sum_j ⟨j + tau|rho|j⟩`, out-of-range kets vanishing.
pub fn single_phase_distribution(
    rho: &DensityMatrix,
    observable: &BasisObservable,
) -> Result<SinglePhaseDistribution> {
    let m = rho.in_basis(observable)?;
    let n = m.nrows() as i64;
    let gammas = (-(n - 1)..n)
        .map(|tau| {
            let s: Complex64 = (0..n)
                .filter(|j| (0..n).contains(&(j + tau)))
                .map(|j| m[((j + tau) as usize, j as usize)])
                .sum();
            s / TAU
        })
        .collect();
    Ok(SinglePhaseDistribution {
        dim: n as usize,
        gammas,
    })
}

/// `E = sum_j |j⟩⟨j + 1|` in basis coordinates.
pub fn susskind_glogower_operator(dim: usize) -> CMatrix {
    let mut e = CMatrix::zeros(dim, dim);
    for j in 0..dim.saturating_sub(1) {
        e[(j, j + 1)] = Complex64::new(1.0, 0.0);
    }
    e
}

/// `tr(rho E^tau) / 2 pi`, where `E^tau = (E^dagger)^{|tau|}` for `tau < 0`.
pub fn susskind_glogower_moment(
    rho: &DensityMatrix,
    observable: &BasisObservable,
    tau: i64,
) -> Result<Complex64> {
    let n = observable.dim();
    if tau.unsigned_abs() as usize >= n.max(1) {
        return Err(Error::TauOutOfRange { tau, dim: n });
    }
    let m = rho.in_basis(observable)?;
    let e = susskind_glogower_operator(n);
    let step = if tau >= 0 { e } else { e.adjoint() };
    let mut power = CMatrix::identity(n, n);
    for _ in 0..tau.unsigned_abs() {
        power = &power * &step;
    }
    Ok((m * power).trace() / TAU)
}
