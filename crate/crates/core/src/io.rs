//! JSON file formats for states and observables.
//!
//! ```text
//! state:      {"dim": N, "re": [[...]], "im": [[...]]}
//! observable: {"dim": N, "eigenvalues": [...], "basis_re": [[...]], "basis_im": [[...]]}
//! ```
//!
//! An observable without `basis_re`/`basis_im` uses the computational basis.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{check_dim, matrix_from_parts, BasisObservable, DensityMatrix};
use crate::CMatrix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl StateFile {
    pub fn from_state(rho: &DensityMatrix) -> Self {
        let (re, im) = split(rho.matrix());
        Self {
            dim: rho.dim(),
            re,
            im,
        }
    }

    pub fn to_state(&self) -> Result<DensityMatrix> {
        let m = matrix_from_parts(&self.re, &self.im)?;
        check_dim(self.dim, m.nrows())?;
        DensityMatrix::new(m)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservableFile {
    pub dim: usize,
    pub eigenvalues: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis_re: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis_im: Option<Vec<Vec<f64>>>,
}

impl ObservableFile {
    pub fn from_observable(observable: &BasisObservable) -> Self {
        let (re, im) = split(observable.basis());
        Self {
            dim: observable.dim(),
            eigenvalues: observable.eigenvalues().to_vec(),
            basis_re: Some(re),
            basis_im: Some(im),
        }
    }

    pub fn to_observable(&self) -> Result<BasisObservable> {
        check_dim(self.dim, self.eigenvalues.len())?;
        let basis = match (&self.basis_re, &self.basis_im) {
            (None, None) => CMatrix::identity(self.dim, self.dim),
            (Some(re), Some(im)) => matrix_from_parts(re, im)?,
            (Some(re), None) => {
                let zeros: Vec<Vec<f64>> = re.iter().map(|r| vec![0.0; r.len()]).collect();
                matrix_from_parts(re, &zeros)?
            }
            (None, Some(_)) => {
                return Err(Error::InvalidState(
                    "basis_im given without basis_re".into(),
                ))
            }
        };
        check_dim(self.dim, basis.nrows())?;
        BasisObservable::new(basis, self.eigenvalues.clone())
    }
}

fn split(m: &CMatrix) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
    let rows =
        |f: fn(&crate::Complex64) -> f64| m.row_iter().map(|r| r.iter().map(f).collect()).collect();
    (rows(|z| z.re), rows(|z| z.im))
}
