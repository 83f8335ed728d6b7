use alloc::vec::Vec;

use super::eigen::hermitian_eig;
use super::{norm, ComplexMatrix, C64, ZERO};
use crate::error::{Error, Result};
use crate::states::BipartiteDims;

/// Coefficients below this are dropped from a [`SchmidtForm`].
pub const SCHMIDT_ZERO: f64 = 1e-12;

/// `|ψ⟩ = Σ_j r_j |a_j⟩|b_j⟩` with `r_1 ≥ r_2 ≥ … > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtForm {
    pub coefficients: Vec<f64>,
    pub left: Vec<Vec<C64>>,
    pub right: Vec<Vec<C64>>,
}

impl SchmidtForm {
    pub fn rank(&self, tol: f64) -> usize {
        self.coefficients.iter().filter(|&&r| r > tol).count()
    }

    pub fn reconstruct(&self) -> Vec<C64> {
        let da = self.left.first().map_or(0, Vec::len);
        let db = self.right.first().map_or(0, Vec::len);
        let mut psi = alloc::vec![ZERO; da * db];
        for ((r, a), b) in self.coefficients.iter().zip(&self.left).zip(&self.right) {
            for i in 0..da {
                for k in 0..db {
                    psi[i * db + k] += a[i] * b[k] * *r;
                }
            }
        }
        psi
    }
}

/// Amplitude matrix `M_{ik} = ψ_{i·d_B + k}`.
fn amplitude_matrix(psi: &[C64], dims: BipartiteDims) -> ComplexMatrix {
    let db = dims.d_b();
    ComplexMatrix::from_fn(dims.d_a(), db, |i, k| psi[i * db + k])
}

/// Schmidt decomposition of a unit vector.
pub fn schmidt(psi: &[C64], dims: BipartiteDims) -> Result<SchmidtForm> {
    if psi.len() != dims.total() {
        return Err(Error::DimensionMismatch {
            expected: dims.total(),
            found: psi.len(),
        });
    }
    let n = norm(psi);
    if (n - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized { norm: n });
    }
    Ok(schmidt_unchecked(psi, dims))
}

pub(crate) fn schmidt_unchecked(psi: &[C64], dims: BipartiteDims) -> SchmidtForm {
    let m = amplitude_matrix(psi, dims);
    let gram = &m * &m.adjoint();
    let eig = hermitian_eig(&gram, f64::INFINITY).expect("Gram matrix is Hermitian");
    let mut terms: Vec<(f64, Vec<C64>, Vec<C64>)> = Vec::new();
    for u in eig.vectors {
        // b = Mᵀ conj(u) / r
        let b: Vec<C64> = (0..dims.d_b())
            .map(|k| (0..dims.d_a()).map(|i| m[(i, k)] * u[i].conj()).sum())
            .collect();
        let r = norm(&b);
        if r > SCHMIDT_ZERO {
            let b = b.iter().map(|z| z / r).collect();
            terms.push((r, u, b));
        }
    }
    terms.sort_by(|x, y| y.0.total_cmp(&x.0));
    if terms.is_empty() {
        let mut a = alloc::vec![ZERO; dims.d_a()];
        let mut b = alloc::vec![ZERO; dims.d_b()];
        a[0] = super::ONE;
        b[0] = super::ONE;
        terms.push((0.0, a, b));
    }
    let mut form = SchmidtForm {
        coefficients: Vec::with_capacity(terms.len()),
        left: Vec::with_capacity(terms.len()),
        right: Vec::with_capacity(terms.len()),
    };
    for (r, a, b) in terms {
        form.coefficients.push(r);
        form.left.push(a);
        form.right.push(b);
    }
    form
}

/// Number of Schmidt coefficients above `tol` (vector need not be
/// normalized; the threshold is relative to its norm).
pub fn schmidt_rank(psi: &[C64], dims: BipartiteDims, tol: f64) -> usize {
    let n = norm(psi);
    if n == 0.0 {
        return 0;
    }
    let unit: Vec<C64> = psi.iter().map(|z| z / n).collect();
    schmidt_unchecked(&unit, dims).rank(tol)
}
