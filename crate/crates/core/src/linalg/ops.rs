use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::states::BipartiteDims;

/// Kronecker product `a ⊗ b`.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (br, bc) = (b.rows(), b.cols());
    ComplexMatrix::from_fn(a.rows() * br, a.cols() * bc, |i, j| {
        a[(i / br, j / bc)] * b[(i % br, j % bc)]
    })
}

fn check_shape(rho: &ComplexMatrix, dims: BipartiteDims) -> Result<()> {
    let d = dims.total();
    if rho.rows() != d || rho.cols() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: if rho.rows() != d { rho.rows() } else { rho.cols() },
        });
    }
    Ok(())
}

/// Transpose on subsystem B: `((i,k),(j,l)) ↦ ((i,l),(j,k))`.
pub fn partial_transpose(rho: &ComplexMatrix, dims: BipartiteDims) -> Result<ComplexMatrix> {
    check_shape(rho, dims)?;
    let db = dims.d_b();
    Ok(ComplexMatrix::from_fn(rho.rows(), rho.cols(), |r, c| {
        let (i, k) = (r / db, r % db);
        let (j, l) = (c / db, c % db);
        rho[(i * db + l, j * db + k)]
    }))
}

/// Realignment `R(ρ)_{(i,j),(k,l)} = ρ_{(i,k),(j,l)}`, a `d_A² × d_B²`
/// matrix. For `ρ = A ⊗ B` it equals `vec(A) vec(B)ᵀ`, so it has rank one.
pub fn realign(rho: &ComplexMatrix, dims: BipartiteDims) -> Result<ComplexMatrix> {
    check_shape(rho, dims)?;
    let (da, db) = (dims.d_a(), dims.d_b());
    Ok(ComplexMatrix::from_fn(da * da, db * db, |r, c| {
        let (i, j) = (r / da, r % da);
        let (k, l) = (c / db, c % db);
        rho[(i * db + k, j * db + l)]
    }))
}
