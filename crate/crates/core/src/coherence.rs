//! Coherence terms relative to a basis and the Hilbert-Schmidt coherence.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::{check_dim, BasisObservable, DensityMatrix};
use crate::CMatrix;

/// One coherence term `⟨j|rho|k⟩`, `j != k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherencePair {
    pub j: usize,
    pub k: usize,
    pub value: Complex64,
}

/// Off-diagonal elements and diagonal statistics of a state in some basis.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceProfile {
    pub dim: usize,
    /// All ordered pairs `(j, k)`, `j != k`, row-major.
    pub pairs: Vec<CoherencePair>,
    /// `p_j = ⟨j|rho|j⟩`
    pub diagonal: Vec<f64>,
}

impl CoherenceProfile {
    pub(crate) fn from_matrix(m: &CMatrix) -> Self {
        let dim = m.nrows();
        let pairs = (0..dim)
            .flat_map(|j| (0..dim).filter(move |&k| k != j).map(move |k| (j, k)))
            .map(|(j, k)| CoherencePair {
                j,
                k,
                value: m[(j, k)],
            })
            .collect();
        let diagonal = (0..dim).map(|j| m[(j, j)].re).collect();
        Self {
            dim,
            pairs,
            diagonal,
        }
    }

    pub fn get(&self, j: usize, k: usize) -> Option<Complex64> {
        self.pairs
            .iter()
            .find(|p| p.j == j && p.k == k)
            .map(|p| p.value)
    }

    /// Pair `j < k` with the largest modulus; lowest `(j, k)` wins ties.
    pub fn strongest(&self) -> Option<CoherencePair> {
        self.pairs
            .iter()
            .filter(|p| p.j < p.k)
            .fold(None, |best: Option<CoherencePair>, p| match best {
                Some(b) if b.value.norm() >= p.value.norm() => Some(b),
                _ => Some(*p),
            })
    }

    pub fn max_modulus(&self) -> f64 {
        self.pairs
            .iter()
            .map(|p| p.value.norm())
            .fold(0.0, f64::max)
    }
}

/// Coherence terms and populations of `rho` in the basis of `observable`.
pub fn coherence_profile(
    rho: &DensityMatrix,
    observable: &BasisObservable,
) -> Result<CoherenceProfile> {
    Ok(CoherenceProfile::from_matrix(&rho.in_basis(observable)?))
}

/// `C_HS = sum_{j != k} |⟨j|rho|k⟩|^2`.
pub fn hilbert_schmidt_coherence(profile: &CoherenceProfile) -> f64 {
    profile.pairs.iter().map(|p| p.value.norm_sqr()).sum()
}

/// A basis exhibiting coherence, together with the pair realizing it.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherentBasis {
    pub basis: BasisObservable,
    pub j: usize,
    pub k: usize,
    /// `|⟨j|rho|k⟩|` in the returned basis.
    pub eps_out: f64,
}

/// Returns a basis in which `rho` has a coherence term, or `None` when
/// `rho` equals `I/N` entrywise within `eps`.
///
/// An existing computational-basis coherence above `eps` is used as is.
/// Otherwise the populations `p_j != p_k` with the largest gap are mixed by a
/// two-level Hadamard rotation, which produces the coherence `(p_j - p_k)/2`
/// (plus whatever residual imaginary part `rho_jk` had).
pub fn find_coherent_basis(rho: &DensityMatrix, eps: f64) -> Result<Option<CoherentBasis>> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::InvalidState(format!(
            "eps must be positive, got {eps}"
        )));
    }
    let n = rho.dim();
    let computational = BasisObservable::linear(n)?;
    let profile = coherence_profile(rho, &computational)?;
    if let Some(p) = profile.strongest() {
        if p.value.norm() > eps {
            return Ok(Some(CoherentBasis {
                basis: computational,
                j: p.j,
                k: p.k,
                eps_out: p.value.norm(),
            }));
        }
    }

    let mut best: Option<(usize, usize, f64)> = None;
    for j in 0..n {
        for k in (j + 1)..n {
            let gap = (profile.diagonal[j] - profile.diagonal[k]).abs();
            if best.is_none_or(|(_, _, g)| gap > g) {
                best = Some((j, k, gap));
            }
        }
    }
    let mixed = 1.0 / n as f64;
    let flat = profile.diagonal.iter().all(|p| (p - mixed).abs() <= eps);
    match best {
        Some((j, k, gap)) if !flat && gap > 0.0 => {
            let basis = BasisObservable::two_level_hadamard(n, j, k)?;
            let eps_out = rho.in_basis(&basis)?[(j, k)].norm();
            Ok(Some(CoherentBasis {
                basis,
                j,
                k,
                eps_out,
            }))
        }
        _ => Ok(None),
    }
}

/// Frobenius norm of `[G, rho]`.
///
/// Coherences inside a degenerate eigenspace of `G` do not contribute.
pub fn commutator_norm(rho: &DensityMatrix, observable: &BasisObservable) -> Result<f64> {
    check_dim(rho.dim(), observable.dim())?;
    let g = observable.operator();
    let m = rho.matrix();
    Ok((&g * m - m * &g).norm())
}
