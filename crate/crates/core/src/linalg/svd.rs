use alloc::vec::Vec;

use super::eigen::hermitian_eig;
use super::{norm, ComplexMatrix};

/// Singular values, descending; `min(rows, cols)` of them.
///
/// Computed from the eigenvectors `v_j` of `m†m` as `‖m v_j‖` rather than
/// `sqrt(λ_j)`: the square root would turn round-off in a zero eigenvalue
/// (~1e-17) into a spurious singular value of ~1e-8.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let k = m.rows().min(m.cols());
    if k == 0 {
        return Vec::new();
    }
    let gram = &m.adjoint() * m;
    let eig = hermitian_eig(&gram, f64::INFINITY).expect("Gram matrix is Hermitian");
    let mut out: Vec<f64> = eig.vectors.iter().map(|v| norm(&m.mul_vec(v))).collect();
    out.sort_by(|a, b| b.total_cmp(a));
    out.truncate(k);
    out
}

/// Sum of singular values. Hermitian input uses `Σ|λ_i|` directly.
pub fn trace_norm(m: &ComplexMatrix) -> f64 {
    if m.is_square() && m.hermitian_deviation() == 0.0 {
        if let Ok(e) = hermitian_eig(m, 0.0) {
            return e.values.iter().map(|x| x.abs()).sum();
        }
    }
    singular_values(m).iter().sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{realign, tensor_product, C64};
    use crate::states::{werner, BipartiteDims};
    use alloc::vec;

    #[test]
    fn diagonal_case() {
        let m = ComplexMatrix::diagonal(&[3.0, -4.0]);
        let s = singular_values(&m);
        assert!((s[0] - 4.0).abs() < 1e-14 && (s[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn unitary_has_unit_singular_values() {
        let h = 1.0 / 2f64.sqrt();
        let u = ComplexMatrix::from_vec(
            2,
            2,
            vec![C64::new(h, 0.0), C64::new(0.0, h), C64::new(0.0, h), C64::new(h, 0.0)],
        )
        .unwrap();
        let u3 = tensor_product(&u, &ComplexMatrix::identity(2));
        for s in singular_values(&u3) {
            assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn squares_match_gram_eigenvalues() {
        let m = ComplexMatrix::from_fn(3, 3, |i, j| C64::new((i * 3 + j) as f64, (i as f64) - (j as f64)));
        let s = singular_values(&m);
        let gram = &m.adjoint() * &m;
        let e = hermitian_eig(&gram, 1e-12).unwrap();
        for (si, li) in s.iter().zip(&e.values) {
            assert!((si * si - li.max(0.0)).abs() < 1e-10);
        }
    }

    #[test]
    fn trace_norm_of_density_matrix_is_one() {
        let rho = werner(0.37).unwrap();
        assert!((trace_norm(rho.matrix()) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn trace_norm_of_realigned_maximally_mixed() {
        let dims = BipartiteDims::new(2, 2).unwrap();
        let r = realign(&ComplexMatrix::identity(4).scale(0.25), dims).unwrap();
        assert!((trace_norm(&r) - 0.5).abs() < 1e-12);
    }
}
