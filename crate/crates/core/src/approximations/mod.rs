//! Robustness, best separable approximation (BSA) and best PPT
//! approximation (BPPTA).

mod sweep;

pub use sweep::{boundary_sweep, family_line, sweep_point, SweepFamily, SweepRow};

use crate::error::{Error, Result};
use crate::linalg::schmidt;
use crate::options::{Criterion, Options};
use crate::separability::{
    bisect, concave_interval, indicator, product_basis_certificate, verdict, SeparabilityVerdict,
};
use crate::states::{max_mixed, DensityMatrix, FamilyLine, PureState};
use crate::structure::{is_product, purely_decompose, StructureDecomposition};

/// Robustness of `τ` relative to `σ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Robustness {
    Finite(f64),
    /// No separable mixture up to the cap.
    InfiniteAbove(f64),
}

impl Robustness {
    pub fn finite(self) -> Option<f64> {
        match self {
            Robustness::Finite(t) => Some(t),
            Robustness::InfiniteAbove(_) => None,
        }
    }
}

/// Minimum `t ≥ 0` with `(τ + t·σ)/(1+t)` separable. Exact where PPT is
/// decisive; above 2×3 a PPT answer is accepted only when it is infinite
/// or the boundary state carries a product-basis certificate.
pub fn robustness(tau: &DensityMatrix, sigma: &DensityMatrix, opts: &Options) -> Result<Robustness> {
    let r = robustness_with(tau, sigma, Criterion::Ppt, opts)?;
    if tau.dims().ppt_is_exact() {
        return Ok(r);
    }
    match r {
        Robustness::InfiniteAbove(_) => Ok(r),
        Robustness::Finite(0.0) if verdict(tau, opts).is_separable() => Ok(r),
        Robustness::Finite(t) => {
            let line = FamilyLine::new(tau.clone(), sigma.clone())?;
            let boundary = line.state_at(1.0 / (1.0 + t))?;
            if product_basis_certificate(&boundary).is_some() {
                Ok(r)
            } else {
                Err(Error::OracleUndecided {
                    context: "robustness above 2x3",
                })
            }
        }
    }
}

/// Criterion-relative robustness: the smallest `t` at which the mixture
/// satisfies `criterion`, located to `opts.bisect_tol` in `t`.
pub fn robustness_with(
    tau: &DensityMatrix,
    sigma: &DensityMatrix,
    criterion: Criterion,
    opts: &Options,
) -> Result<Robustness> {
    let line = FamilyLine::new(tau.clone(), sigma.clone())?;
    let f = indicator(&line, criterion);
    if f(1.0) >= -opts.psd_tol {
        return Ok(Robustness::Finite(0.0));
    }
    if is_rank_one(sigma) && is_rank_one(tau) {
        let (s, t) = (sigma.eig(), tau.eig());
        if is_product(&s.vectors[0], sigma.dims()) && !is_product(&t.vectors[0], tau.dims()) {
            // span{x, ψ} holds at most one more product vector x₂, and with
            // ψ = αx + βx₂ every mixture keeps the αβ̄ coherence between x
            // and x₂, so no mixture is separable
            return Ok(Robustness::InfiniteAbove(opts.t_max));
        }
    }
    let interval = concave_interval(&f, opts.psd_tol, opts.bisect_tol).ok_or(Error::NoSeparablePoint)?;
    let s_star = interval.high;
    if s_star <= 1.0 / (1.0 + opts.t_max) {
        return Ok(Robustness::InfiniteAbove(opts.t_max));
    }
    let inside = |t: f64| f(1.0 / (1.0 + t)) >= 0.0;
    let mut t_in = (1.0 - s_star) / s_star;
    let mut margin = 1e-9;
    while !inside(t_in) {
        t_in = t_in * (1.0 + margin) + margin;
        margin *= 4.0;
        if t_in > opts.t_max {
            return Ok(Robustness::InfiniteAbove(opts.t_max));
        }
    }
    Ok(Robustness::Finite(bisect(&inside, t_in, 0.0, opts.bisect_tol)))
}

fn is_rank_one(rho: &DensityMatrix) -> bool {
    rho.eig().max() >= 1.0 - 1e-12
}

/// `r₁·r₂·d_A·d_B` from the two largest Schmidt coefficients.
pub fn random_robustness_pure(psi: &PureState) -> Result<f64> {
    let form = schmidt(psi.amplitudes(), psi.dims())?;
    if form.rank(1e-12) < 2 {
        return Err(Error::ProductState);
    }
    let dims = psi.dims();
    Ok(form.coefficients[0] * form.coefficients[1] * dims.total() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BsaMode {
    Exact,
    CriterionRelative(Criterion),
    /// Infinite robustness: the separable part itself is the approximation.
    GeneralDecomposition,
}

impl BsaMode {
    pub fn as_str(self) -> &'static str {
        match self {
            BsaMode::Exact => "exact",
            BsaMode::CriterionRelative(Criterion::Ppt) => "ppt-relative",
            BsaMode::CriterionRelative(Criterion::Ccnr) => "ccnr-relative",
            BsaMode::CriterionRelative(Criterion::Exact) => "exact",
            BsaMode::GeneralDecomposition => "general-decomposition",
        }
    }
}

/// `ρ = Λ_S·ρ^PE + (1-Λ_S)·ρ^BSA`
#[derive(Debug, Clone, PartialEq)]
pub struct BsaDecomposition {
    pub lambda_s: f64,
    /// Absent when `ρ` has no separable part at all.
    pub bsa: Option<DensityMatrix>,
    /// Absent when `ρ` is separable.
    pub remainder: Option<DensityMatrix>,
    pub mode: BsaMode,
    /// Robustness of the remainder relative to the separable part.
    pub robustness: Option<Robustness>,
}

impl BsaDecomposition {
    pub fn reconstruct(&self) -> Option<crate::ComplexMatrix> {
        let n = self.bsa.as_ref().or(self.remainder.as_ref())?.dim();
        let mut m = crate::ComplexMatrix::zeros(n, n);
        if let Some(b) = &self.bsa {
            m = m.lin_comb(1.0, b.matrix(), 1.0 - self.lambda_s);
        }
        if let Some(r) = &self.remainder {
            m = m.lin_comb(1.0, r.matrix(), self.lambda_s);
        }
        Some(m)
    }

    fn separable(rho: &DensityMatrix, mode: BsaMode) -> Self {
        BsaDecomposition {
            lambda_s: 0.0,
            bsa: Some(rho.clone()),
            remainder: None,
            mode,
            robustness: Some(Robustness::Finite(0.0)),
        }
    }
}

/// Best separable approximation through the structure decomposition and
/// the robustness of `ρ^PE` relative to `ρ^PS`.
pub fn bsa(rho: &DensityMatrix, opts: &Options) -> Result<BsaDecomposition> {
    if verdict(rho, opts).is_separable() {
        return Ok(BsaDecomposition::separable(rho, BsaMode::Exact));
    }
    let s = purely_decompose(rho, opts).certify()?;
    from_structure(rho, &s, None, opts)
}

/// BSA relative to one criterion: the approximation sits on the criterion
/// boundary of the structure line.
pub fn bsa_relative(rho: &DensityMatrix, criterion: Criterion, opts: &Options) -> Result<BsaDecomposition> {
    if criterion == Criterion::Exact {
        return bsa(rho, opts);
    }
    let s = purely_decompose(rho, opts);
    let f_rho = match criterion {
        Criterion::Ppt => crate::separability::ppt_min_eig(rho),
        _ => 1.0 - crate::separability::ccnr_norm(rho),
    };
    if f_rho >= -opts.psd_tol {
        return Ok(BsaDecomposition::separable(rho, BsaMode::CriterionRelative(criterion)));
    }
    from_structure(rho, &s, Some(criterion), opts)
}

/// One criterion-relative BSA per decisive criterion (PPT, CCNR); used when
/// the exact BSA is undecided.
pub fn bsa_bracket(rho: &DensityMatrix, opts: &Options) -> alloc::vec::Vec<BsaDecomposition> {
    [Criterion::Ppt, Criterion::Ccnr]
        .into_iter()
        .filter_map(|c| bsa_relative(rho, c, opts).ok())
        .collect()
}

fn from_structure(
    rho: &DensityMatrix,
    s: &StructureDecomposition,
    criterion: Option<Criterion>,
    opts: &Options,
) -> Result<BsaDecomposition> {
    let mode = criterion.map_or(BsaMode::Exact, BsaMode::CriterionRelative);
    let Some(pe) = &s.pe else {
        return Ok(BsaDecomposition::separable(rho, mode));
    };
    let Some(ps) = &s.ps else {
        return Ok(BsaDecomposition {
            lambda_s: 1.0,
            bsa: None,
            remainder: Some(pe.clone()),
            mode,
            robustness: None,
        });
    };
    let r = match criterion {
        None => robustness(pe, ps, opts)?,
        Some(c) => robustness_with(pe, ps, c, opts)?,
    };
    let lambda_pe = 1.0 - s.lambda_ps;
    match r {
        Robustness::InfiniteAbove(_) => Ok(BsaDecomposition {
            lambda_s: lambda_pe,
            bsa: Some(ps.clone()),
            remainder: Some(pe.clone()),
            mode: BsaMode::GeneralDecomposition,
            robustness: Some(r),
        }),
        Robustness::Finite(t) => {
            let t_s = 1.0 / (1.0 + t);
            if lambda_pe <= t_s {
                let mut out = BsaDecomposition::separable(rho, mode);
                out.robustness = Some(r);
                return Ok(out);
            }
            let lambda_s = ((lambda_pe * (1.0 + t) - 1.0) / t).clamp(0.0, 1.0);
            let line = FamilyLine::new(pe.clone(), ps.clone())?;
            Ok(BsaDecomposition {
                lambda_s,
                bsa: Some(line.state_at(t_s)?),
                remainder: Some(pe.clone()),
                mode,
                robustness: Some(r),
            })
        }
    }
}

/// `ρ = Λ_B·ρ^PE + (1-Λ_B)·ρ^BPPTA`
#[derive(Debug, Clone, PartialEq)]
pub struct BpptaDecomposition {
    pub lambda_b: f64,
    pub bppta: Option<DensityMatrix>,
    pub remainder: Option<DensityMatrix>,
    /// Weight of `ρ^PE` at the PPT boundary of the structure line.
    pub boundary_t: Option<f64>,
}

impl BpptaDecomposition {
    pub fn reconstruct(&self) -> Option<crate::ComplexMatrix> {
        let n = self.bppta.as_ref().or(self.remainder.as_ref())?.dim();
        let mut m = crate::ComplexMatrix::zeros(n, n);
        if let Some(b) = &self.bppta {
            m = m.lin_comb(1.0, b.matrix(), 1.0 - self.lambda_b);
        }
        if let Some(r) = &self.remainder {
            m = m.lin_comb(1.0, r.matrix(), self.lambda_b);
        }
        Some(m)
    }
}

/// Best PPT approximation along the structure line of `ρ`.
pub fn bppta(rho: &DensityMatrix, opts: &Options) -> Result<BpptaDecomposition> {
    if crate::separability::ppt_min_eig(rho) >= -opts.psd_tol {
        return Ok(BpptaDecomposition {
            lambda_b: 0.0,
            bppta: Some(rho.clone()),
            remainder: None,
            boundary_t: None,
        });
    }
    let s = purely_decompose(rho, opts);
    let (Some(pe), Some(ps)) = (&s.pe, &s.ps) else {
        return Ok(BpptaDecomposition {
            lambda_b: 1.0,
            bppta: None,
            remainder: Some(rho.clone()),
            boundary_t: None,
        });
    };
    let lambda_pe = 1.0 - s.lambda_ps;
    match robustness_with(pe, ps, Criterion::Ppt, opts)? {
        Robustness::InfiniteAbove(_) => Ok(BpptaDecomposition {
            lambda_b: lambda_pe,
            bppta: Some(ps.clone()),
            remainder: Some(pe.clone()),
            boundary_t: Some(0.0),
        }),
        Robustness::Finite(t) => {
            let t_star = 1.0 / (1.0 + t);
            let lambda_b = ((lambda_pe - t_star) / (1.0 - t_star)).clamp(0.0, 1.0);
            let line = FamilyLine::new(pe.clone(), ps.clone())?;
            Ok(BpptaDecomposition {
                lambda_b,
                bppta: Some(line.state_at(t_star)?),
                remainder: Some(pe.clone()),
                boundary_t: Some(t_star),
            })
        }
    }
}

/// BSA of `weight·|ψ⟩⟨ψ| + (1-weight)·I/D` with the threshold weight `w*`
/// from the PPT boundary, next to the closed forms it is checked against.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseBsa {
    pub decomposition: BsaDecomposition,
    /// Pure-state weight of `ρ^BSA` from the PPT-boundary oracle.
    pub w_star: f64,
    /// `1/(1 + D·r₁·r₂)`
    pub w_formula: f64,
    /// `D·r₁·r₂/(1 + D·r₁·r₂)`, the complementary closed form.
    pub w_complement: f64,
}

pub fn pure_plus_noise_bsa(psi: &PureState, weight: f64, opts: &Options) -> Result<NoiseBsa> {
    if !(0.0..=1.0).contains(&weight) {
        return Err(Error::OutOfRange {
            name: "weight",
            value: weight,
        });
    }
    let r = random_robustness_pure(psi)?;
    let dims = psi.dims();
    let noise = max_mixed(dims);
    let pure = psi.density();
    let w_star = match robustness_with(&pure, &noise, Criterion::Ppt, opts)? {
        Robustness::Finite(t) => 1.0 / (1.0 + t),
        Robustness::InfiniteAbove(_) => 0.0,
    };
    let mode = if dims.ppt_is_exact() {
        BsaMode::Exact
    } else {
        BsaMode::CriterionRelative(Criterion::Ppt)
    };
    let line = FamilyLine::new(pure.clone(), noise)?;
    let rho = line.state_at(weight)?;
    let decomposition = if weight <= w_star {
        BsaDecomposition::separable(&rho, mode)
    } else {
        BsaDecomposition {
            lambda_s: (weight - w_star) / (1.0 - w_star),
            bsa: Some(line.state_at(w_star)?),
            remainder: Some(pure),
            mode,
            robustness: Some(Robustness::Finite((1.0 - w_star) / w_star)),
        }
    };
    Ok(NoiseBsa {
        decomposition,
        w_star,
        w_formula: 1.0 / (1.0 + r),
        w_complement: r / (1.0 + r),
    })
}

/// Verdict of `ρ^BSA`, for callers checking where it sits.
pub fn bsa_verdict(d: &BsaDecomposition, opts: &Options) -> Option<SeparabilityVerdict> {
    d.bsa.as_ref().map(|b| verdict(b, opts))
}
