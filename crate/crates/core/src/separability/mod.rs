//! Separability criteria and three-valued verdicts with certificates.

mod finer;
mod search;
mod witness;

use alloc::vec::Vec;

pub use finer::{finer_decomposition, FinerCertificate};
pub use search::{
    bisect, ccnr_crossings, concave_interval, golden_max, indicator, interval_crossings,
    min_separable_weight, SeparableInterval,
};
pub(crate) use search::criterion_interval;
pub use witness::{common_witness_exists, WitnessAnswer};
pub(crate) use witness::{pair_relation, PairRelation};

use crate::linalg::{
    hermitian_eigvals, kron_vec, partial_transpose, realign, schmidt_rank, trace_norm,
    ComplexMatrix, C64,
};
use crate::options::Options;
use crate::states::{BipartiteDims, DensityMatrix};
use crate::structure::products::{mixture, orthogonal_product_basis, split_product};

/// Eigenvalues at or below this are treated as the kernel.
pub(crate) const KERNEL_TOL: f64 = 1e-12;
/// Eigenvalue grouping gap for degenerate eigenspaces.
pub(crate) const EIGENSPACE_GAP: f64 = 1e-9;
const RECONSTRUCTION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Separable,
    Entangled,
    Undecided,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Separable => "Separable",
            Outcome::Entangled => "Entangled",
            Outcome::Undecided => "Undecided",
        }
    }
}

/// `weight · |left⟩⟨left| ⊗ |right⟩⟨right|`
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedProduct {
    pub weight: f64,
    pub left: Vec<C64>,
    pub right: Vec<C64>,
}

impl WeightedProduct {
    pub fn vector(&self) -> Vec<C64> {
        kron_vec(&self.left, &self.right)
    }
}

/// `Σ w_i |x_i⟩⟨x_i|` over a product list.
pub fn product_mixture(products: &[WeightedProduct]) -> Option<ComplexMatrix> {
    let n = products.first()?.vector().len();
    let weighted: Vec<(f64, Vec<C64>)> = products.iter().map(|p| (p.weight, p.vector())).collect();
    Some(mixture(&weighted, n))
}

#[derive(Debug, Clone, PartialEq)]
pub enum Certificate {
    PptViolation { min_eigenvalue: f64 },
    CcnrViolation { norm: f64 },
    /// PPT holds and `d_A·d_B ≤ 6`.
    ExactLowDim,
    ProductBasisDiagonal(Vec<WeightedProduct>),
    SchmidtRankOne,
    None,
}

impl Certificate {
    pub fn as_str(&self) -> &'static str {
        match self {
            Certificate::PptViolation { .. } => "PptViolation",
            Certificate::CcnrViolation { .. } => "CcnrViolation",
            Certificate::ExactLowDim => "ExactLowDim",
            Certificate::ProductBasisDiagonal(_) => "ProductBasisDiagonal",
            Certificate::SchmidtRankOne => "SchmidtRankOne",
            Certificate::None => "None",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeparabilityVerdict {
    pub outcome: Outcome,
    pub certificate: Certificate,
}

impl SeparabilityVerdict {
    pub fn is_separable(&self) -> bool {
        self.outcome == Outcome::Separable
    }

    pub fn is_entangled(&self) -> bool {
        self.outcome == Outcome::Entangled
    }

    /// `Outcome(Certificate)`, e.g. `Entangled(PptViolation)`.
    pub fn label(&self) -> alloc::string::String {
        alloc::format!("{}({})", self.outcome.as_str(), self.certificate.as_str())
    }
}

pub(crate) fn ppt_min_eig_of(m: &ComplexMatrix, dims: BipartiteDims) -> f64 {
    let pt = partial_transpose(m, dims).expect("shape checked by caller");
    hermitian_eigvals(&pt).last().copied().unwrap_or(0.0)
}

pub(crate) fn ccnr_norm_of(m: &ComplexMatrix, dims: BipartiteDims) -> f64 {
    trace_norm(&realign(m, dims).expect("shape checked by caller"))
}

/// Minimum eigenvalue of the partial transpose.
pub fn ppt_min_eig(rho: &DensityMatrix) -> f64 {
    ppt_min_eig_of(rho.matrix(), rho.dims())
}

/// Trace norm of the realigned matrix.
pub fn ccnr_norm(rho: &DensityMatrix) -> f64 {
    ccnr_norm_of(rho.matrix(), rho.dims())
}

/// Three-valued separability verdict.
///
/// Order of checks: pure product state, PPT violation, CCNR violation, PPT
/// exactness in `d_A·d_B ≤ 6`, product-basis certificate.
pub fn verdict(rho: &DensityMatrix, opts: &Options) -> SeparabilityVerdict {
    let tol = opts.psd_tol;
    let eig = rho.eig();
    if eig.max() >= 1.0 - tol && schmidt_rank(&eig.vectors[0], rho.dims(), 1e-9) == 1 {
        return SeparabilityVerdict {
            outcome: Outcome::Separable,
            certificate: Certificate::SchmidtRankOne,
        };
    }
    let min_eigenvalue = ppt_min_eig(rho);
    if min_eigenvalue < -tol {
        return SeparabilityVerdict {
            outcome: Outcome::Entangled,
            certificate: Certificate::PptViolation { min_eigenvalue },
        };
    }
    let norm = ccnr_norm(rho);
    if norm > 1.0 + tol {
        return SeparabilityVerdict {
            outcome: Outcome::Entangled,
            certificate: Certificate::CcnrViolation { norm },
        };
    }
    if rho.dims().ppt_is_exact() {
        return SeparabilityVerdict {
            outcome: Outcome::Separable,
            certificate: Certificate::ExactLowDim,
        };
    }
    if let Some(products) = product_basis_certificate(rho) {
        return SeparabilityVerdict {
            outcome: Outcome::Separable,
            certificate: Certificate::ProductBasisDiagonal(products),
        };
    }
    SeparabilityVerdict {
        outcome: Outcome::Undecided,
        certificate: Certificate::None,
    }
}

/// Explicit decomposition `Σ p_i |e_i f_i⟩⟨e_i f_i|` when `ρ` is diagonal in
/// an orthogonal product basis: either the computational one, or one built
/// eigenspace by eigenspace with the subspace product-vector search.
pub fn product_basis_certificate(rho: &DensityMatrix) -> Option<Vec<WeightedProduct>> {
    let dims = rho.dims();
    let m = rho.matrix();
    let n = rho.dim();
    let mut vectors: Vec<Vec<C64>> = Vec::new();
    let is_diagonal = (0..n).all(|i| (0..n).all(|j| i == j || m[(i, j)].norm() <= 1e-15));
    if is_diagonal {
        for i in 0..n {
            vectors.push(crate::linalg::basis_vector(n, i));
        }
    } else {
        for space in rho.eig().eigenspaces(EIGENSPACE_GAP) {
            if space.value <= KERNEL_TOL {
                continue;
            }
            let (products, rest) = orthogonal_product_basis(&space.vectors, dims);
            if !rest.is_empty() {
                return None;
            }
            vectors.extend(products);
        }
    }
    let mut out = Vec::new();
    for x in vectors {
        let weight = m.expectation(&x);
        if weight <= KERNEL_TOL {
            continue;
        }
        let (left, right) = split_product(&x, dims)?;
        out.push(WeightedProduct { weight, left, right });
    }
    let rebuilt = product_mixture(&out)?;
    (rebuilt.max_abs_diff(m) <= RECONSTRUCTION_TOL).then_some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::schmidt_rank;
    use crate::states::{
        horodecki_sigma, max_entangled, max_mixed, q_operator, werner, BipartiteDims,
    };

    fn opts() -> Options {
        Options::default()
    }

    #[test]
    fn werner_ppt_min_eig_is_linear() {
        for p in [0.0, 0.2, 1.0 / 3.0, 0.5, 1.0] {
            let got = ppt_min_eig(&werner(p).unwrap());
            assert!((got - (1.0 - 3.0 * p) / 4.0).abs() < 1e-12, "p = {p}");
        }
        assert!((ppt_min_eig(&max_entangled(2).density()) + 0.5).abs() < 1e-12);
    }

    #[test]
    fn ccnr_of_maximally_mixed() {
        let d = BipartiteDims::new(2, 2).unwrap();
        assert!((ccnr_norm(&max_mixed(d)) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn verdict_examples() {
        let v = verdict(&werner(0.5).unwrap(), &opts());
        assert_eq!(v.label(), "Entangled(PptViolation)");
        let v = verdict(&werner(0.2).unwrap(), &opts());
        assert_eq!(v.label(), "Separable(ExactLowDim)");
        let rho = horodecki_sigma(3.5).unwrap();
        assert!(ppt_min_eig(&rho) >= -1e-9);
        let v = verdict(&rho, &opts());
        assert_eq!(v.label(), "Entangled(CcnrViolation)");
    }

    #[test]
    fn product_basis_certificates() {
        let d = BipartiteDims::new(2, 2).unwrap();
        let c = product_basis_certificate(&max_mixed(d)).unwrap();
        assert_eq!(c.len(), 4);
        assert!(c.iter().all(|p| (p.weight - 0.25).abs() < 1e-15));

        let d3 = BipartiteDims::new(3, 3).unwrap();
        let q = DensityMatrix::new(q_operator().scale(0.2), d3).unwrap();
        let c = product_basis_certificate(&q).unwrap();
        assert_eq!(c.len(), 5);
        for p in &c {
            assert_eq!(schmidt_rank(&p.vector(), d3, 1e-9), 1);
        }
        assert_eq!(verdict(&q, &opts()).certificate.as_str(), "ProductBasisDiagonal");

        assert!(product_basis_certificate(&max_entangled(2).density()).is_none());
    }

    #[test]
    fn rotated_product_basis_is_certified() {
        // (|+⟩⟨+| ⊗ |0⟩⟨0| + |−⟩⟨−| ⊗ |1⟩⟨1|)/2 is not diagonal but has a
        // product eigenbasis
        let h = 0.5f64.sqrt();
        let plus = [C64::new(h, 0.0), C64::new(h, 0.0)];
        let minus = [C64::new(h, 0.0), C64::new(-h, 0.0)];
        let e0 = [C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
        let e1 = [C64::new(0.0, 0.0), C64::new(1.0, 0.0)];
        let m = mixture(&[(0.7, kron_vec(&plus, &e0)), (0.3, kron_vec(&minus, &e1))], 4);
        let rho = DensityMatrix::new(m, BipartiteDims::new(2, 2).unwrap()).unwrap();
        let c = product_basis_certificate(&rho).unwrap();
        assert_eq!(c.len(), 2);
    }
}
