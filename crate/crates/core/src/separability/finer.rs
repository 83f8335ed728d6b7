//! `σ₁ = (1-ε)σ₂ + ε·Ω` decompositions.

use super::search::bisect;
use super::{verdict, SeparabilityVerdict};
use crate::error::{Error, Result};
use crate::linalg::hermitian_eigvals;
use crate::options::Options;
use crate::states::DensityMatrix;

/// `σ₁ − c·σ₂ ⪰ 0` is tested as `λ_min ≥ -FEASIBILITY_TOL`.
const FEASIBILITY_TOL: f64 = 1e-13;
const C_TOL: f64 = 1e-15;
const INCOMPARABLE_BELOW: f64 = 1e-9;
const EQUAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct FinerCertificate {
    /// `ε ∈ [0, 1)`.
    pub epsilon: f64,
    /// `Ω = (σ₁ − (1-ε)σ₂)/ε`; absent when `ε = 0`.
    pub omega: Option<DensityMatrix>,
    pub omega_verdict: Option<SeparabilityVerdict>,
}

/// Largest `c = 1-ε` with `σ₁ − c·σ₂ ⪰ 0`, found by bisection on the
/// concave map `c ↦ λ_min(σ₁ − c·σ₂)`.
pub fn finer_decomposition(
    sigma1: &DensityMatrix,
    sigma2: &DensityMatrix,
    opts: &Options,
) -> Result<FinerCertificate> {
    if sigma1.dims() != sigma2.dims() {
        return Err(Error::DimensionMismatch {
            expected: sigma1.dim(),
            found: sigma2.dim(),
        });
    }
    if sigma1.max_abs_diff(sigma2) <= EQUAL_TOL {
        return Ok(FinerCertificate {
            epsilon: 0.0,
            omega: None,
            omega_verdict: None,
        });
    }
    let (m1, m2) = (sigma1.matrix(), sigma2.matrix());
    let feasible = |c: f64| {
        let d = m1.lin_comb(1.0, m2, -c);
        hermitian_eigvals(&d).last().copied().unwrap_or(0.0) >= -FEASIBILITY_TOL
    };
    let c_star = bisect(&feasible, 0.0, 1.0, C_TOL);
    if c_star < INCOMPARABLE_BELOW {
        return Err(Error::Incomparable);
    }
    let epsilon = 1.0 - c_star;
    let omega_matrix = m1.lin_comb(1.0 / epsilon, m2, -c_star / epsilon);
    let omega = DensityMatrix::from_parts(omega_matrix, sigma1.dims());
    let omega_verdict = verdict(&omega, opts);
    Ok(FinerCertificate {
        epsilon,
        omega: Some(omega),
        omega_verdict: Some(omega_verdict),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{max_entangled, max_mixed, werner, BipartiteDims};

    fn i4() -> DensityMatrix {
        max_mixed(BipartiteDims::new(2, 2).unwrap())
    }

    #[test]
    fn werner_against_maximally_mixed() {
        let c = finer_decomposition(&werner(0.2).unwrap(), &i4(), &Options::default()).unwrap();
        assert!((c.epsilon - 0.2).abs() < 1e-12);
        let psi = max_entangled(2).density();
        assert!(c.omega.unwrap().max_abs_diff(&psi) < 1e-10);

        let c = finer_decomposition(&werner(0.5).unwrap(), &i4(), &Options::default()).unwrap();
        assert!((c.epsilon - 0.5).abs() < 1e-12);
        assert!(c.omega_verdict.unwrap().is_entangled());
    }

    #[test]
    fn equal_states_give_zero() {
        let w = werner(0.3).unwrap();
        let c = finer_decomposition(&w, &w, &Options::default()).unwrap();
        assert_eq!(c.epsilon, 0.0);
        assert!(c.omega.is_none());
    }

    #[test]
    fn larger_support_is_incomparable() {
        let psi = max_entangled(2).density();
        assert_eq!(
            finer_decomposition(&psi, &i4(), &Options::default()),
            Err(Error::Incomparable)
        );
    }
}
