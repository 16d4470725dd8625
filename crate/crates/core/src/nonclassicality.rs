//! Negativity witness for the joint distribution of `sigma_z` and
//! `sigma_perp` on a two-level subspace.
//!
//! For levels `j != k` of a basis the Pauli-like operators are
//!
//! ```text
//! sigma_z    = |j⟩⟨j| - |k⟩⟨k|
//! sigma_phi  = e^{i phi}|j⟩⟨k| + e^{-i phi}|k⟩⟨j|
//! sigma_perp = i (e^{i phi}|j⟩⟨k| - e^{-i phi}|k⟩⟨j|)
//! ```
//!
//! and the inverted joint distribution of a noisy joint measurement of
//! `sigma_z` and `sigma_perp` is
//!
//! ```text
//! p(y, z) = 1/4 [1 + z⟨sigma_z⟩ + y⟨sigma_perp⟩ + yz (gamma_yz / (gamma_y gamma_z)) ⟨sigma_phi⟩]
//! ```
//!
//! with `gamma_y^2 + gamma_z^2 + gamma_yz^2 <= 1`. Any nonzero coherence
//! `⟨j|rho|k⟩` makes some `p(y, z)` negative for a suitable triple.

use serde::{Deserialize, Serialize};

use crate::coherence::coherence_profile;
use crate::error::{Error, Result};
use crate::state::{check_index, BasisObservable, DensityMatrix};
use crate::{tolerance, CMatrix, Complex64};

/// Outcome order used for the four joint values.
pub const OUTCOMES: [(i8, i8); 4] = [(-1, -1), (-1, 1), (1, -1), (1, 1)];

/// Expectations of the Pauli-like operators on the `(j, k)` subspace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliSubspace {
    pub j: usize,
    pub k: usize,
    /// Phase in `[0, 2 pi)` aligning `sigma_phi` with the coherence.
    pub phi: f64,
    pub exp_z: f64,
    pub exp_phi: f64,
    pub exp_perp: f64,
}

impl PauliSubspace {
    /// `(sigma_z, sigma_phi, sigma_perp)` as `N x N` matrices in basis coordinates.
    pub fn operators(dim: usize, j: usize, k: usize, phi: f64) -> (CMatrix, CMatrix, CMatrix) {
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        let e = Complex64::from_polar(1.0, phi);

        let mut z = CMatrix::zeros(dim, dim);
        z[(j, j)] = one;
        z[(k, k)] = -one;

        let mut s = CMatrix::zeros(dim, dim);
        s[(j, k)] = e;
        s[(k, j)] = e.conj();

        let mut perp = CMatrix::zeros(dim, dim);
        perp[(j, k)] = i * e;
        perp[(k, j)] = -i * e.conj();
        (z, s, perp)
    }
}

/// Two-level restriction of `rho` on levels `j`, `k` of `observable`'s basis.
///
/// `phi = arg⟨j|rho|k⟩` makes `⟨sigma_phi⟩ = 2|⟨j|rho|k⟩|` and `⟨sigma_perp⟩ = 0`.
pub fn pauli_subspace(
    rho: &DensityMatrix,
    observable: &BasisObservable,
    j: usize,
    k: usize,
) -> Result<PauliSubspace> {
    let n = observable.dim();
    check_index(j, n)?;
    check_index(k, n)?;
    if j == k {
        return Err(Error::EqualIndices(j));
    }
    let m = rho.in_basis(observable)?;
    let coherence = m[(j, k)];
    let phi = if coherence.norm() > 0.0 {
        coherence.arg().rem_euclid(std::f64::consts::TAU)
    } else {
        0.0
    };
    let (z, s, perp) = PauliSubspace::operators(n, j, k, phi);
    let expect = |op: &CMatrix| (&m * op).trace().re;
    Ok(PauliSubspace {
        j,
        k,
        phi,
        exp_z: expect(&z),
        exp_phi: expect(&s),
        exp_perp: expect(&perp),
    })
}

/// Measurement parameters `(gamma_y, gamma_z, gamma_yz)` inside the unit ball.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaTriple {
    gamma_y: f64,
    gamma_z: f64,
    gamma_yz: f64,
}

impl GammaTriple {
    pub fn new(gamma_y: f64, gamma_z: f64, gamma_yz: f64) -> Result<Self> {
        if gamma_y == 0.0 || gamma_z == 0.0 {
            return Err(Error::ZeroGammaDenominator { gamma_y, gamma_z });
        }
        let norm_sq = gamma_y * gamma_y + gamma_z * gamma_z + gamma_yz * gamma_yz;
        if norm_sq.is_nan() || norm_sq > 1.0 + tolerance::GAMMA_BALL {
            return Err(Error::GammaOutsideBall { norm_sq });
        }
        Ok(Self {
            gamma_y,
            gamma_z,
            gamma_yz,
        })
    }

    /// `gamma_y = gamma_z = t`, `gamma_yz = sqrt(1 - 2t^2)`.
    pub fn symmetric(t: f64) -> Result<Self> {
        Self::new(t, t, (1.0 - 2.0 * t * t).max(0.0).sqrt())
    }

    pub fn gamma_y(&self) -> f64 {
        self.gamma_y
    }

    pub fn gamma_z(&self) -> f64 {
        self.gamma_z
    }

    pub fn gamma_yz(&self) -> f64 {
        self.gamma_yz
    }

    /// `gamma_yz / (gamma_y gamma_z)`
    pub fn correlation_ratio(&self) -> f64 {
        self.gamma_yz / (self.gamma_y * self.gamma_z)
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.gamma_y, self.gamma_z, self.gamma_yz]
    }
}

/// The four values `p(y, z)` in [`OUTCOMES`] order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointDistribution {
    pub values: [f64; 4],
    pub gamma: GammaTriple,
    pub subspace: PauliSubspace,
}

impl JointDistribution {
    pub fn p(&self, y: i8, z: i8) -> f64 {
        let idx = OUTCOMES
            .iter()
            .position(|&o| o == (y, z))
            .expect("y and z must be +1 or -1");
        self.values[idx]
    }

    /// Most negative outcome; the first in [`OUTCOMES`] order wins ties.
    pub fn minimum(&self) -> (i8, i8, f64) {
        let mut best = 0;
        for idx in 1..4 {
            if self.values[idx] < self.values[best] {
                best = idx;
            }
        }
        let (y, z) = OUTCOMES[best];
        (y, z, self.values[best])
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }
}

/// Evaluates `p(y, z)` for every outcome, normalized so the four values sum to one.
pub fn joint_distribution(
    subspace: &PauliSubspace,
    gamma: &GammaTriple,
) -> Result<JointDistribution> {
    if gamma.gamma_y == 0.0 || gamma.gamma_z == 0.0 {
        return Err(Error::ZeroGammaDenominator {
            gamma_y: gamma.gamma_y,
            gamma_z: gamma.gamma_z,
        });
    }
    let ratio = gamma.correlation_ratio();
    let values = OUTCOMES.map(|(y, z)| {
        let (y, z) = (f64::from(y), f64::from(z));
        0.25 * (1.0 + z * subspace.exp_z + y * subspace.exp_perp + y * z * ratio * subspace.exp_phi)
    });
    Ok(JointDistribution {
        values,
        gamma: *gamma,
        subspace: *subspace,
    })
}

/// Result of [`witness_search`].
#[derive(Debug, Clone, PartialEq)]
pub enum WitnessCertificate {
    /// A valid gamma triple and outcome with `p(y, z) < 0`.
    Nonclassical {
        subspace: PauliSubspace,
        gamma: GammaTriple,
        y: i8,
        z: i8,
        value: f64,
    },
    /// Every coherence is at most the tolerance. `min_p` is the infimum of
    /// `p(y, z)` over all admissible triples, `(1 - |⟨sigma_z⟩|)/4`, minimized
    /// over pairs; `subspace` is the pair attaining it.
    Classical {
        subspace: Option<PauliSubspace>,
        min_p: f64,
    },
}

impl WitnessCertificate {
    pub fn is_nonclassical(&self) -> bool {
        matches!(self, Self::Nonclassical { .. })
    }

    /// Negative certificate value, or the classical infimum.
    pub fn min_p(&self) -> f64 {
        match self {
            Self::Nonclassical { value, .. } => *value,
            Self::Classical { min_p, .. } => *min_p,
        }
    }

    pub fn to_record(&self) -> CertificateRecord {
        match self {
            Self::Nonclassical {
                subspace,
                gamma,
                y,
                z,
                value,
            } => CertificateRecord::Nonclassical {
                pair: [subspace.j, subspace.k],
                phi: subspace.phi,
                gamma: gamma.as_array(),
                y: *y,
                z: *z,
                p: *value,
            },
            Self::Classical { min_p, .. } => CertificateRecord::Classical {
                verdict: "classical".into(),
                min_p: *min_p,
            },
        }
    }
}

/// JSON form of a certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CertificateRecord {
    Nonclassical {
        pair: [usize; 2],
        phi: f64,
        gamma: [f64; 3],
        y: i8,
        z: i8,
        p: f64,
    },
    Classical {
        verdict: String,
        min_p: f64,
    },
}

/// `t` such that the symmetric triple drives some `p(y, z)` below zero.
///
/// With `t = exp_phi / 4 <= 1/2` the correlation term equals
/// `16 sqrt(1 - 2t^2) / exp_phi >= 8 sqrt(1/2) > 2 >= 1 + |exp_z|`.
/// The floor on `t` keeps the ratio finite.
fn schedule(exp_phi: f64) -> f64 {
    (exp_phi / 4.0).clamp(tolerance::GAMMA_FLOOR, 0.5)
}

/// Looks for a negative joint value on the pair with the strongest coherence.
pub fn witness_search(
    rho: &DensityMatrix,
    observable: &BasisObservable,
    tol_witness: f64,
) -> Result<WitnessCertificate> {
    let profile = coherence_profile(rho, observable)?;
    let n = profile.dim;
    if let Some(strongest) = profile.strongest() {
        if strongest.value.norm() > tol_witness {
            let subspace = pauli_subspace(rho, observable, strongest.j, strongest.k)?;
            let gamma = GammaTriple::symmetric(schedule(subspace.exp_phi))?;
            let (y, z, value) = joint_distribution(&subspace, &gamma)?.minimum();
            if value < 0.0 {
                return Ok(WitnessCertificate::Nonclassical {
                    subspace,
                    gamma,
                    y,
                    z,
                    value,
                });
            }
        }
    }

    let mut best: Option<(PauliSubspace, f64)> = None;
    for j in 0..n {
        for k in (j + 1)..n {
            let s = pauli_subspace(rho, observable, j, k)?;
            let inf = 0.25 * (1.0 - s.exp_z.abs());
            if best.is_none_or(|(_, b)| inf < b) {
                best = Some((s, inf));
            }
        }
    }
    Ok(match best {
        Some((s, min_p)) => WitnessCertificate::Classical {
            subspace: Some(s),
            min_p,
        },
        None => WitnessCertificate::Classical {
            subspace: None,
            min_p: 0.25,
        },
    })
}
