//! State JSON: `{"dims":[dA,dB],"matrix":[[[re,im],...],...]}`, row-major.

use std::path::Path;

use serde::{Deserialize, Serialize};

use sepstruct_core::{BipartiteDims, ComplexMatrix, DensityMatrix, C64};

use crate::error::CliError;
use crate::output::write_atomic;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateJson {
    pub dims: [usize; 2],
    pub matrix: Vec<Vec<[f64; 2]>>,
}

impl StateJson {
    pub fn from_state(rho: &DensityMatrix) -> Self {
        let m = rho.matrix();
        let dims = rho.dims();
        StateJson {
            dims: [dims.d_a(), dims.d_b()],
            matrix: (0..m.rows())
                .map(|i| m.row(i).iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        }
    }

    /// Checks the shape, then the density-matrix invariants within `tol`.
    pub fn to_state(&self, tol: f64) -> Result<DensityMatrix, CliError> {
        let dims = BipartiteDims::new(self.dims[0], self.dims[1]).map_err(CliError::Validation)?;
        let n = dims.total();
        if self.matrix.len() != n || self.matrix.iter().any(|row| row.len() != n) {
            return Err(CliError::Validation(sepstruct_core::Error::Validation {
                invariant: sepstruct_core::Invariant::Shape,
            }));
        }
        let data = self
            .matrix
            .iter()
            .flatten()
            .map(|&[re, im]| C64::new(re, im))
            .collect();
        let m = ComplexMatrix::from_vec(n, n, data).map_err(CliError::Validation)?;
        DensityMatrix::with_tol(m, dims, tol).map_err(CliError::Validation)
    }
}

pub fn parse_state(text: &str, tol: f64) -> Result<DensityMatrix, CliError> {
    let json: StateJson = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    json.to_state(tol)
}

pub fn load_state(path: &Path, tol: f64) -> Result<DensityMatrix, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse_state(&text, tol)
}

pub fn state_to_string(rho: &DensityMatrix) -> String {
    let mut s = serde_json::to_string(&StateJson::from_state(rho)).expect("finite floats serialize");
    s.push('\n');
    s
}

pub fn save_state(path: &Path, rho: &DensityMatrix) -> Result<(), CliError> {
    write_atomic(path, state_to_string(rho).as_bytes())
}
