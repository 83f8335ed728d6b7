//! Common entanglement witness oracle.
//!
//! A set of entangled states has a common witness exactly when no convex
//! mixture of them is separable.

use alloc::vec::Vec;

// shadowed by inherent float methods when a dependency links std
#[allow(unused_imports)]
use num_traits::Float;

use super::search::{criterion_interval, SeparableInterval};
use super::{ppt_min_eig_of, product_basis_certificate, verdict, Outcome};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, partial_transpose, ComplexMatrix};
use crate::options::{Criterion, Options};
use crate::states::{DensityMatrix, FamilyLine};

/// Points per simplex edge for three or more states.
pub const SIMPLEX_RESOLUTION: usize = 64;
const MAX_SIMPLEX_POINTS: usize = 50_000;
const ASCENT_STEPS: usize = 400;
const ASCENT_RATE: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessAnswer {
    Yes,
    No,
    Undecided,
}

impl WitnessAnswer {
    pub fn as_str(self) -> &'static str {
        match self {
            WitnessAnswer::Yes => "Yes",
            WitnessAnswer::No => "No",
            WitnessAnswer::Undecided => "Undecided",
        }
    }
}

/// How two entangled states relate along their connecting line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum PairRelation {
    /// Every mixture violates PPT or every mixture violates CCNR.
    CommonWitness,
    /// Mixtures in the interval are certified separable.
    Mixable(SeparableInterval),
    /// Mixtures in the PPT interval are PPT but not certified separable.
    PptOnly(SeparableInterval),
}

/// Relation of `a` and `b` on the line `t·a + (1-t)·b`.
pub(crate) fn pair_relation(
    a: &DensityMatrix,
    b: &DensityMatrix,
    psd_tol: f64,
    bisect_tol: f64,
) -> PairRelation {
    let line = FamilyLine {
        pe: a.clone(),
        ps: b.clone(),
    };
    let Some(ppt) = criterion_interval(&line, Criterion::Ppt, psd_tol, bisect_tol) else {
        return PairRelation::CommonWitness;
    };
    if line.dims().ppt_is_exact() {
        return PairRelation::Mixable(ppt);
    }
    if criterion_interval(&line, Criterion::Ccnr, psd_tol, bisect_tol).is_none() {
        return PairRelation::CommonWitness;
    }
    let mid = 0.5 * (ppt.low + ppt.high);
    let state = DensityMatrix::from_parts(line.matrix_at(mid), line.dims());
    if product_basis_certificate(&state).is_some() {
        PairRelation::Mixable(SeparableInterval { low: mid, high: mid })
    } else {
        PairRelation::PptOnly(ppt)
    }
}

/// Decides whether the given entangled states share a witness.
///
/// Pairs are settled along their connecting line with the concave PPT
/// indicator, which is rigorous in every dimension when the answer is Yes.
/// Three or more states are first handled by supergradient ascent of the
/// concave `p ↦ λ_min(PT(Σ p_i ρ_i))` on the simplex, which stops at a
/// common decomposable witness or at a certified separable mixture; failing
/// both, the simplex is sampled on a grid and a Yes from the grid is
/// reported only where PPT is exact.
pub fn common_witness_exists(states: &[DensityMatrix], opts: &Options) -> Result<WitnessAnswer> {
    for (index, s) in states.iter().enumerate() {
        if !verdict(s, opts).is_entangled() {
            return Err(Error::InputNotEntangled { index });
        }
        if s.dims() != states[0].dims() {
            return Err(Error::DimensionMismatch {
                expected: states[0].dim(),
                found: s.dim(),
            });
        }
    }
    if states.len() <= 1 {
        return Ok(WitnessAnswer::Yes);
    }
    let mut undecided = false;
    for i in 0..states.len() {
        for j in i + 1..states.len() {
            match pair_relation(&states[i], &states[j], opts.psd_tol, opts.bisect_tol) {
                PairRelation::Mixable(_) => return Ok(WitnessAnswer::No),
                PairRelation::PptOnly(_) => undecided = true,
                PairRelation::CommonWitness => {}
            }
        }
    }
    if states.len() == 2 {
        return Ok(if undecided {
            WitnessAnswer::Undecided
        } else {
            WitnessAnswer::Yes
        });
    }

    if let Some(answer) = simplex_ascent(states, opts) {
        return Ok(answer);
    }
    let k = states.len();
    let mut resolution = SIMPLEX_RESOLUTION;
    while resolution > k && simplex_size(resolution, k) > MAX_SIMPLEX_POINTS {
        resolution /= 2;
    }
    let mut point = Vec::with_capacity(k);
    let mut all_entangled = true;
    let mut found_separable = false;
    for_each_composition(resolution, k, &mut point, &mut |weights| {
        if found_separable || weights.iter().filter(|&&w| w > 0).count() < 3 {
            return;
        }
        let mut m = states[0].matrix().scale(0.0);
        for (s, &w) in states.iter().zip(weights) {
            m = m.lin_comb(1.0, s.matrix(), w as f64 / resolution as f64);
        }
        if ppt_min_eig_of(&m, states[0].dims()) < -opts.psd_tol {
            return;
        }
        match verdict(&DensityMatrix::from_parts(m, states[0].dims()), opts).outcome {
            Outcome::Separable => found_separable = true,
            Outcome::Entangled => {}
            Outcome::Undecided => all_entangled = false,
        }
    });
    if found_separable {
        Ok(WitnessAnswer::No)
    } else if all_entangled && !undecided && states[0].dims().ppt_is_exact() {
        Ok(WitnessAnswer::Yes)
    } else {
        Ok(WitnessAnswer::Undecided)
    }
}

/// Exponentiated supergradient ascent of `λ_min(PT(Σ p_i ρ_i))`.
///
/// With `v` the lowest eigenvector of the current partial transpose,
/// `W = PT(|v⟩⟨v|)` has `tr(W ρ_i) = ⟨v|PT(ρ_i)|v⟩ = g_i`, and the
/// supergradient bound gives `λ_min ≤ max_i g_i` on the whole simplex. A
/// negative bound makes `W` a common witness; a mixture reaching
/// `λ_min ≥ -psd_tol` is handed to [`verdict`].
fn simplex_ascent(states: &[DensityMatrix], opts: &Options) -> Option<WitnessAnswer> {
    let k = states.len();
    let dims = states[0].dims();
    let pts: Vec<ComplexMatrix> = states
        .iter()
        .map(|s| partial_transpose(s.matrix(), dims).expect("shape checked"))
        .collect();
    let mut p = alloc::vec![1.0 / k as f64; k];
    for step in 0..ASCENT_STEPS {
        let mut m = pts[0].scale(0.0);
        for (pt, &w) in pts.iter().zip(&p) {
            m = m.lin_comb(1.0, pt, w);
        }
        let eig = hermitian_eig(&m, f64::INFINITY).expect("Hermitian");
        let value = eig.min();
        let v = eig.vectors.last().expect("non-empty");
        let g: Vec<f64> = pts.iter().map(|pt| pt.expectation(v)).collect();
        if g.iter().cloned().fold(f64::NEG_INFINITY, f64::max) < -opts.psd_tol {
            return Some(WitnessAnswer::Yes);
        }
        if value >= -opts.psd_tol {
            let mut mix = states[0].matrix().scale(0.0);
            for (s, &w) in states.iter().zip(&p) {
                mix = mix.lin_comb(1.0, s.matrix(), w);
            }
            return match verdict(&DensityMatrix::from_parts(mix, dims), opts).outcome {
                Outcome::Separable => Some(WitnessAnswer::No),
                _ => None,
            };
        }
        let rate = ASCENT_RATE / (step as f64 + 1.0).sqrt();
        let top = g.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        for (pi, gi) in p.iter_mut().zip(&g) {
            *pi *= (rate * (gi - top)).exp();
        }
        let total: f64 = p.iter().sum();
        for pi in p.iter_mut() {
            *pi /= total;
        }
    }
    None
}

/// Number of compositions of `n` into `k` non-negative parts.
fn simplex_size(n: usize, k: usize) -> usize {
    let mut c: usize = 1;
    for i in 1..k {
        c = c.saturating_mul(n + i) / i;
    }
    c
}

fn for_each_composition(n: usize, k: usize, prefix: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if k == 1 {
        prefix.push(n);
        f(prefix);
        prefix.pop();
        return;
    }
    for w in 0..=n {
        prefix.push(w);
        for_each_composition(n - w, k - 1, prefix, f);
        prefix.pop();
    }
}
