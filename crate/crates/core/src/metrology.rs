//! Resolution of the signal `U(λ) = exp(-iλg)` imprinted on a state.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::phase::SinglePhaseDistribution;
use crate::state::{
    check_dim, evolve, hermitian_eigenvalues, max_abs, BasisObservable, DensityMatrix,
    UnitarySignal,
};
use crate::{tolerance, CMatrix};

/// A finite POVM `{Δ(μ)}` in computational coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    dim: usize,
    outcomes: Vec<CMatrix>,
    /// Common factor with `Δ(μ)² = η Δ(μ)` for every outcome, when one exists.
    eta: Option<f64>,
}

impl Povm {
    /// Validates positivity and completeness, and derives `η` when the
    /// outcomes are uniformly scaled projectors.
    pub fn new(outcomes: Vec<CMatrix>) -> Result<Self> {
        let first = outcomes
            .first()
            .ok_or_else(|| Error::InvalidPovm("no outcomes".into()))?;
        let dim = first.nrows();
        let mut sum = CMatrix::zeros(dim, dim);
        for (mu, op) in outcomes.iter().enumerate() {
            let (rows, cols) = op.shape();
            if rows != cols {
                return Err(Error::NonSquare { rows, cols });
            }
            check_dim(dim, rows)?;
            let asym = max_abs(&(op - op.adjoint()));
            if asym > tolerance::POVM {
                return Err(Error::InvalidPovm(format!("outcome {mu} is not Hermitian")));
            }
            let min_eig = hermitian_eigenvalues(op)[0];
            if min_eig < -tolerance::PSD {
                return Err(Error::InvalidPovm(format!(
                    "outcome {mu} has negative eigenvalue {min_eig:e}"
                )));
            }
            sum += op;
        }
        let completeness = max_abs(&(sum - CMatrix::identity(dim, dim)));
        if completeness > tolerance::POVM {
            return Err(Error::InvalidPovm(format!(
                "outcomes do not sum to identity (deviation {completeness:e})"
            )));
        }
        let eta = idempotency_factor(&outcomes);
        Ok(Self { dim, outcomes, eta })
    }

    /// Rank-one projectors onto the columns of a unitary; `η = 1`.
    pub fn projective_columns(basis: &CMatrix) -> Result<Self> {
        let outcomes = basis.column_iter().map(|c| c * c.adjoint()).collect();
        Self::new(outcomes)
    }

    /// Projective measurement in the eigenbasis of `observable`.
    pub fn projective(observable: &BasisObservable) -> Result<Self> {
        Self::projective_columns(observable.basis())
    }

    /// Projective measurement onto `N^{-1/2} sum_j e^{i j (2 pi m + pi)/N} |j⟩`
    /// relative to the basis of `observable`.
    ///
    /// The half-step offset keeps the outcome statistics sensitive to a
    /// signal generated in that basis; for `N = 2` these are the
    /// `sigma_y` eigenstates `(|0⟩ ± i|1⟩)/√2`.
    pub fn shifted_fourier(observable: &BasisObservable) -> Result<Self> {
        let n = observable.dim();
        let f = crate::state::fourier_matrix(n, PI / n as f64);
        Self::projective_columns(&(observable.basis() * f))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn outcomes(&self) -> &[CMatrix] {
        &self.outcomes
    }

    pub fn eta(&self) -> Option<f64> {
        self.eta
    }

    /// `p_μ = tr(Δ(μ) rho)`.
    pub fn probabilities(&self, rho: &DensityMatrix) -> Result<Vec<f64>> {
        check_dim(self.dim, rho.dim())?;
        Ok(self
            .outcomes
            .iter()
            .map(|op| (op * rho.matrix()).trace().re)
            .collect())
    }
}

fn idempotency_factor(outcomes: &[CMatrix]) -> Option<f64> {
    let mut eta: Option<f64> = None;
    for op in outcomes {
        let tr = op.trace().re;
        if tr <= tolerance::POVM {
            continue;
        }
        let sq = op * op;
        let candidate = sq.trace().re / tr;
        if (sq - op.scale(candidate)).norm() > tolerance::POVM {
            return None;
        }
        match eta {
            Some(e) if (e - candidate).abs() > tolerance::POVM => return None,
            Some(_) => {}
            None => eta = Some(candidate),
        }
    }
    eta
}

/// Resolution from the single-phase distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolutionReport {
    /// `Δ²λ = 1 / (2 √π ∫ P²(phi) dphi)`
    pub delta2_lambda: f64,
    /// `∫_0^{2 pi} P²(phi) dphi`
    pub integral_p2: f64,
    /// `2 pi sum_tau |Gamma(tau)|²`, the area read as a coherence time.
    pub coherence_time_interpretation: f64,
    /// No coherence at any shift: `P(phi) = 1 / 2 pi`. The formula still
    /// gives the finite value `√π` although no signal is carried.
    pub flat: bool,
}

pub fn wiener_kintchine_resolution(dist: &SinglePhaseDistribution) -> Result<ResolutionReport> {
    let integral_p2 = dist.integral_p2();
    if integral_p2.is_nan() || integral_p2 <= 0.0 {
        return Err(Error::DegenerateDistribution);
    }
    let flat = dist
        .gammas()
        .all(|(tau, g)| tau == 0 || g.norm() <= tolerance::FLAT);
    Ok(ResolutionReport {
        delta2_lambda: 1.0 / (2.0 * PI.sqrt() * integral_p2),
        integral_p2,
        coherence_time_interpretation: dist.coherence_area(),
        flat,
    })
}

/// `d²_HS = sum_μ [p_μ(λ) - p_μ(0)]²`, exact at finite `λ`.
pub fn statistical_distance(
    rho: &DensityMatrix,
    signal: &UnitarySignal,
    povm: &Povm,
) -> Result<f64> {
    let before = povm.probabilities(rho)?;
    let after = povm.probabilities(&evolve(rho, signal)?)?;
    Ok(before
        .iter()
        .zip(&after)
        .map(|(a, b)| (b - a).powi(2))
        .sum())
}

/// `p'_μ = i sum_{j != k} (g_k - g_j) ⟨j|rho|k⟩ ⟨k|Δ(μ)|j⟩` at `λ = 0`.
pub fn statistics_derivative(
    rho: &DensityMatrix,
    generator: &BasisObservable,
    povm: &Povm,
) -> Result<Vec<f64>> {
    check_dim(povm.dim, rho.dim())?;
    let m = rho.in_basis(generator)?;
    let g = generator.eigenvalues();
    let n = m.nrows();
    let i = Complex64::new(0.0, 1.0);
    Ok(povm
        .outcomes
        .iter()
        .map(|op| {
            let d = generator.to_basis(op);
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n {
                for k in 0..n {
                    if j != k {
                        acc += (g[k] - g[j]) * m[(j, k)] * d[(k, j)];
                    }
                }
            }
            (i * acc).re
        })
        .collect())
}

/// `sum_μ p'_μ²`, the coefficient of `λ²` in `d²_HS` for small signals.
pub fn small_signal_quadratic(
    rho: &DensityMatrix,
    generator: &BasisObservable,
    povm: &Povm,
) -> Result<f64> {
    Ok(statistics_derivative(rho, generator, povm)?
        .iter()
        .map(|d| d * d)
        .sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundStatus {
    Satisfied,
    Violated,
    /// `η - sum_μ p_μ²` vanishes; the right-hand side is undefined.
    NotApplicable,
}

/// Both sides of `4 Δ²g >= sum_μ p'_μ² / (η - sum_μ p_μ²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub lhs: f64,
    pub rhs: Option<f64>,
    pub status: BoundStatus,
}

impl BoundReport {
    pub fn satisfied(&self) -> bool {
        self.status == BoundStatus::Satisfied
    }
}

/// Checks the variance bound; requires `Δ(μ)² = η Δ(μ)`.
pub fn uncertainty_bound_check(
    rho: &DensityMatrix,
    generator: &BasisObservable,
    povm: &Povm,
) -> Result<BoundReport> {
    let eta = povm.eta.ok_or(Error::EtaMissing)?;
    let m = rho.in_basis(generator)?;
    let (mean, mean_sq) =
        generator
            .eigenvalues()
            .iter()
            .enumerate()
            .fold((0.0, 0.0), |(a, b), (j, &g)| {
                let p = m[(j, j)].re;
                (a + p * g, b + p * g * g)
            });
    let lhs = 4.0 * (mean_sq - mean * mean);
    let numerator = small_signal_quadratic(rho, generator, povm)?;
    let purity: f64 = povm.probabilities(rho)?.iter().map(|p| p * p).sum();
    let denominator = eta - purity;
    if denominator <= tolerance::BOUND_DENOMINATOR {
        return Ok(BoundReport {
            lhs,
            rhs: None,
            status: BoundStatus::NotApplicable,
        });
    }
    let rhs = numerator / denominator;
    let status = if lhs >= rhs - tolerance::BOUND_SLACK {
        BoundStatus::Satisfied
    } else {
        BoundStatus::Violated
    };
    Ok(BoundReport {
        lhs,
        rhs: Some(rhs),
        status,
    })
}

/// Intrinsic distance between `rho(λ)` and `rho`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceReport {
    /// `tr[(rho(λ) - rho)²]`
    pub exact: f64,
    /// `sum_{j != k} (g_k - g_j)² |⟨j|rho|k⟩|²`
    pub quadratic_coefficient: f64,
    /// `-tr([rho, g]²)`, equal to `quadratic_coefficient`.
    pub commutator_coefficient: f64,
}

pub fn density_matrix_distance(
    rho: &DensityMatrix,
    signal: &UnitarySignal,
) -> Result<DistanceReport> {
    let evolved = evolve(rho, signal)?;
    let diff = evolved.matrix() - rho.matrix();
    let exact = (&diff * &diff).trace().re;

    let generator = &signal.generator;
    let m = rho.in_basis(generator)?;
    let g = generator.eigenvalues();
    let mut quadratic_coefficient = 0.0;
    for j in 0..m.nrows() {
        for k in 0..m.ncols() {
            if j != k {
                quadratic_coefficient += (g[k] - g[j]).powi(2) * m[(j, k)].norm_sqr();
            }
        }
    }

    let op = generator.operator();
    let comm = rho.matrix() * &op - &op * rho.matrix();
    let commutator_coefficient = -(&comm * &comm).trace().re;
    Ok(DistanceReport {
        exact,
        quadratic_coefficient,
        commutator_coefficient,
    })
}
