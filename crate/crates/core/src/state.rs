//! Density matrices, basis observables and unitary signals.
//!
//! Indices are 0-based: level `j` of an `N`-level system is `j = 0, ..., N-1`.
//! The generator with unit-spaced eigenvalues `g_j = j` over levels counted
//! from one is available as [`BasisObservable::linear`], which stores the
//! eigenvalue list `(1, 2, ..., N)` explicitly.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::{tolerance, CMatrix, CVector};

/// Thresholds applied when validating a density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub hermitian: f64,
    pub trace: f64,
    pub unitary: f64,
    pub psd: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermitian: tolerance::HERMITIAN,
            trace: tolerance::TRACE,
            unitary: tolerance::UNITARY,
            psd: tolerance::PSD,
        }
    }
}

/// Outcome of [`validate_state`]: the worst violation of each invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub dim: usize,
    /// `max_jk |rho_jk - conj(rho_kj)|`
    pub hermitian_deviation: f64,
    /// `|tr(rho) - 1|`
    pub trace_deviation: f64,
    /// Smallest eigenvalue of the Hermitian part.
    pub min_eigenvalue: f64,
    pub tolerances: Tolerances,
}

impl ValidationReport {
    pub fn hermitian_ok(&self) -> bool {
        self.hermitian_deviation <= self.tolerances.hermitian
    }

    pub fn trace_ok(&self) -> bool {
        self.trace_deviation <= self.tolerances.trace
    }

    pub fn psd_ok(&self) -> bool {
        self.min_eigenvalue >= -self.tolerances.psd
    }

    pub fn is_valid(&self) -> bool {
        self.hermitian_ok() && self.trace_ok() && self.psd_ok()
    }

    /// First failed invariant, checked in the order Hermitian, trace, PSD.
    pub fn check(&self) -> Result<()> {
        if !self.hermitian_ok() {
            return Err(Error::NonHermitian {
                max_deviation: self.hermitian_deviation,
            });
        }
        if !self.trace_ok() {
            return Err(Error::TraceNotOne {
                deviation: self.trace_deviation,
            });
        }
        if !self.psd_ok() {
            return Err(Error::NotPositiveSemidefinite {
                min_eigenvalue: self.min_eigenvalue,
            });
        }
        Ok(())
    }
}

fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

pub(crate) fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub(crate) fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut eig: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    eig.sort_by(f64::total_cmp);
    eig
}

/// Checks Hermiticity, unit trace and positivity of a square matrix.
///
/// Only a non-square input is an error; every other violation is recorded in
/// the report and surfaced by [`ValidationReport::check`].
pub fn validate_state(matrix: &CMatrix, tol: &Tolerances) -> Result<ValidationReport> {
    let (rows, cols) = matrix.shape();
    if rows != cols {
        return Err(Error::NonSquare { rows, cols });
    }
    if rows == 0 {
        return Err(Error::ZeroDimension);
    }
    let hermitian_deviation = max_abs(&(matrix - matrix.adjoint()));
    let trace_deviation = (matrix.trace() - Complex64::new(1.0, 0.0)).norm();
    let min_eigenvalue = hermitian_eigenvalues(&hermitian_part(matrix))[0];
    Ok(ValidationReport {
        dim: rows,
        hermitian_deviation,
        trace_deviation,
        min_eigenvalue,
        tolerances: *tol,
    })
}

/// A validated `N x N` density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validates with the default tolerances.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        Self::with_tolerances(matrix, &Tolerances::default())
    }

    /// Validates `matrix`. Slightly negative eigenvalues (within `tol.psd`)
    /// are clamped to zero and the trace renormalized.
    pub fn with_tolerances(matrix: CMatrix, tol: &Tolerances) -> Result<Self> {
        let report = validate_state(&matrix, tol)?;
        report.check()?;
        let herm = hermitian_part(&matrix);
        if report.min_eigenvalue >= 0.0 {
            let tr = herm.trace().re;
            return Ok(Self {
                matrix: herm.unscale(tr),
            });
        }
        let eig = SymmetricEigen::new(herm);
        let clamped = eig.eigenvalues.map(|v| v.max(0.0));
        let total: f64 = clamped.iter().sum();
        let diag = CMatrix::from_diagonal(&clamped.map(|v| Complex64::new(v / total, 0.0)));
        let v = &eig.eigenvectors;
        Ok(Self {
            matrix: hermitian_part(&(v * diag * v.adjoint())),
        })
    }

    /// Builds from row-major real and imaginary parts.
    pub fn from_parts(re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<Self> {
        Self::new(matrix_from_parts(re, im)?)
    }

    /// Wraps a matrix known to satisfy the invariants up to rounding, such
    /// as the unitary image of a valid state.
    pub(crate) fn from_trusted(matrix: CMatrix) -> Self {
        Self {
            matrix: hermitian_part(&matrix),
        }
    }

    /// `I / N`.
    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        Ok(Self {
            matrix: CMatrix::identity(dim, dim).unscale(dim as f64),
        })
    }

    /// `|psi⟩⟨psi|` for the normalized `psi`.
    pub fn pure(psi: &CVector) -> Result<Self> {
        let norm = psi.norm();
        if psi.is_empty() || norm == 0.0 {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        let psi = psi.unscale(norm);
        Ok(Self {
            matrix: &psi * psi.adjoint(),
        })
    }

    /// Uniform superposition `|+⟩ = N^{-1/2} sum_j |j⟩`; every entry equals `1/N`.
    pub fn plus(dim: usize) -> Result<Self> {
        Self::pure(&CVector::from_element(dim, Complex64::new(1.0, 0.0)))
    }

    /// Diagonal state with the given populations.
    pub fn diagonal(populations: &[f64]) -> Result<Self> {
        let d = CVector::from_iterator(
            populations.len(),
            populations.iter().map(|&p| Complex64::new(p, 0.0)),
        );
        Self::new(CMatrix::from_diagonal(&d))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn element(&self, j: usize, k: usize) -> Complex64 {
        self.matrix[(j, k)]
    }

    /// `tr(rho^2)`
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix)
    }

    /// Matrix elements `⟨j|rho|k⟩` in the basis of `observable`.
    pub fn in_basis(&self, observable: &BasisObservable) -> Result<CMatrix> {
        check_dim(self.dim(), observable.dim())?;
        Ok(observable.to_basis(&self.matrix))
    }

    /// Frobenius distance to `I / N`.
    pub fn distance_from_mixed(&self) -> f64 {
        let n = self.dim();
        let mixed = CMatrix::identity(n, n).unscale(n as f64);
        (&self.matrix - mixed).norm()
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

pub(crate) fn matrix_from_parts(re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<CMatrix> {
    let rows = re.len();
    let cols = re.first().map_or(0, Vec::len);
    let ragged = re.iter().any(|r| r.len() != cols)
        || im.len() != rows
        || im.iter().any(|r| r.len() != cols);
    if ragged {
        return Err(Error::InvalidState(
            "real and imaginary parts must be rectangular and of equal shape".into(),
        ));
    }
    if rows != cols {
        return Err(Error::NonSquare { rows, cols });
    }
    Ok(DMatrix::from_fn(rows, cols, |r, c| {
        Complex64::new(re[r][c], im[r][c])
    }))
}

/// An observable `G = sum_j g_j |j⟩⟨j|` given by its eigenbasis and eigenvalues.
///
/// Columns of `basis` are the kets `|j⟩` in computational coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisObservable {
    basis: CMatrix,
    eigenvalues: Vec<f64>,
}

impl BasisObservable {
    pub fn new(basis: CMatrix, eigenvalues: Vec<f64>) -> Result<Self> {
        let (rows, cols) = basis.shape();
        if rows != cols {
            return Err(Error::NonSquare { rows, cols });
        }
        if rows == 0 {
            return Err(Error::ZeroDimension);
        }
        check_dim(rows, eigenvalues.len())?;
        let gram = basis.adjoint() * &basis - CMatrix::identity(rows, rows);
        let max_deviation = max_abs(&gram);
        if max_deviation > tolerance::UNITARY {
            return Err(Error::NonUnitaryBasis { max_deviation });
        }
        Ok(Self { basis, eigenvalues })
    }

    /// Computational basis with the given eigenvalues.
    pub fn computational(eigenvalues: Vec<f64>) -> Result<Self> {
        let n = eigenvalues.len();
        Self::new(CMatrix::identity(n, n), eigenvalues)
    }

    /// Computational basis with `g = (1, 2, ..., N)`.
    pub fn linear(dim: usize) -> Result<Self> {
        Self::computational(linear_eigenvalues(dim))
    }

    /// Discrete Fourier basis `|f_m⟩ = N^{-1/2} sum_j e^{2 pi i jm/N} |j⟩`
    /// with `g = (1, ..., N)`. For `N = 2` this is the Hadamard basis.
    pub fn fourier(dim: usize) -> Result<Self> {
        Self::new(fourier_matrix(dim, 0.0), linear_eigenvalues(dim))
    }

    /// Computational basis with levels `j` and `k` replaced by
    /// `(|j⟩ ± |k⟩)/√2`; `g = (1, ..., N)`.
    pub fn two_level_hadamard(dim: usize, j: usize, k: usize) -> Result<Self> {
        check_index(j, dim)?;
        check_index(k, dim)?;
        if j == k {
            return Err(Error::EqualIndices(j));
        }
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut b = CMatrix::identity(dim, dim);
        b[(j, j)] = Complex64::new(s, 0.0);
        b[(k, j)] = Complex64::new(s, 0.0);
        b[(j, k)] = Complex64::new(s, 0.0);
        b[(k, k)] = Complex64::new(-s, 0.0);
        Self::new(b, linear_eigenvalues(dim))
    }

    /// Same basis, different eigenvalues.
    pub fn with_eigenvalues(self, eigenvalues: Vec<f64>) -> Result<Self> {
        check_dim(self.dim(), eigenvalues.len())?;
        Ok(Self {
            basis: self.basis,
            eigenvalues,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// `|j⟩` in computational coordinates.
    pub fn ket(&self, j: usize) -> CVector {
        self.basis.column(j).into_owned()
    }

    /// `G` in computational coordinates.
    pub fn operator(&self) -> CMatrix {
        let d = CVector::from_iterator(
            self.dim(),
            self.eigenvalues.iter().map(|&g| Complex64::new(g, 0.0)),
        );
        &self.basis * CMatrix::from_diagonal(&d) * self.basis.adjoint()
    }

    /// `B^dagger M B`: matrix elements `⟨j|M|k⟩`.
    pub fn to_basis(&self, m: &CMatrix) -> CMatrix {
        self.basis.adjoint() * m * &self.basis
    }

    /// `B M B^dagger`: back to computational coordinates.
    pub fn from_basis(&self, m: &CMatrix) -> CMatrix {
        &self.basis * m * self.basis.adjoint()
    }
}

pub(crate) fn check_index(index: usize, dim: usize) -> Result<()> {
    if index >= dim {
        return Err(Error::IndexOutOfRange { index, dim });
    }
    Ok(())
}

pub(crate) fn linear_eigenvalues(dim: usize) -> Vec<f64> {
    (1..=dim).map(|j| j as f64).collect()
}

/// Unitary with columns `N^{-1/2} sum_j e^{i j (2 pi m/N + offset)} |j⟩`.
pub(crate) fn fourier_matrix(dim: usize, offset: f64) -> CMatrix {
    let norm = (dim as f64).sqrt();
    DMatrix::from_fn(dim, dim, |j, m| {
        let angle = j as f64 * (2.0 * std::f64::consts::PI * m as f64 / dim as f64 + offset);
        Complex64::from_polar(1.0 / norm, angle)
    })
}

/// The signal `U(λ) = exp(-iλg)` imprinted by a generator.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitarySignal {
    pub generator: BasisObservable,
    pub lambda: f64,
}

impl UnitarySignal {
    pub fn new(generator: BasisObservable, lambda: f64) -> Self {
        Self { generator, lambda }
    }

    /// `B diag(e^{-iλ g_j}) B^dagger`.
    pub fn unitary(&self) -> CMatrix {
        let phases = CVector::from_iterator(
            self.generator.dim(),
            self.generator
                .eigenvalues()
                .iter()
                .map(|&g| Complex64::from_polar(1.0, -self.lambda * g)),
        );
        self.generator.from_basis(&CMatrix::from_diagonal(&phases))
    }
}

/// `rho(λ) = U(λ) rho U(λ)^dagger`.
pub fn evolve(rho: &DensityMatrix, signal: &UnitarySignal) -> Result<DensityMatrix> {
    check_dim(rho.dim(), signal.generator.dim())?;
    let u = signal.unitary();
    Ok(DensityMatrix::from_trusted(&u * rho.matrix() * u.adjoint()))
}

fn complex_gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

/// Random state `A A^dagger / tr(A A^dagger)` for a seeded complex Gaussian
/// `dim x rank` matrix `A`.
pub fn random_state(dim: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    if dim == 0 {
        return Err(Error::ZeroDimension);
    }
    if rank == 0 || rank > dim {
        return Err(Error::InvalidRank { dim, rank });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = DMatrix::from_fn(dim, rank, |_, _| complex_gaussian(&mut rng));
    let rho = &a * a.adjoint();
    let tr = rho.trace().re;
    Ok(DensityMatrix::from_trusted(rho.unscale(tr)))
}

/// Haar-random orthonormal basis with eigenvalues `(1, ..., N)`.
pub fn random_basis(dim: usize, seed: u64) -> Result<BasisObservable> {
    if dim == 0 {
        return Err(Error::ZeroDimension);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let z = DMatrix::from_fn(dim, dim, |_, _| complex_gaussian(&mut rng));
    let qr = z.qr();
    let (mut q, r) = qr.unpack();
    for c in 0..dim {
        let d = r[(c, c)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let mut col = q.column_mut(c);
        col *= phase;
    }
    BasisObservable::new(q, linear_eigenvalues(dim))
}
