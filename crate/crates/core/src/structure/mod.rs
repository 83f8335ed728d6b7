//! Purely entangled / purely separable structure of a state.
//!
//! `ρ = Λ·ρ^PS + (1-Λ)·ρ^PE`, where `ρ^PS` is a separable state built from
//! product eigenvectors, boundary mixtures of entangled eigenvectors that
//! have no common witness, and product vectors subtracted from the range of
//! the remainder; `ρ^PE` is what is left.

pub mod products;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

pub use products::{
    is_product, orthogonal_product_basis, product_vectors_in_subspace, split_product,
};

use crate::linalg::{hermitian_eig, inner, ComplexMatrix, C64};
use crate::options::Options;
use crate::separability::{
    pair_relation, product_basis_certificate, product_mixture, verdict, PairRelation,
    SeparabilityVerdict, WeightedProduct, EIGENSPACE_GAP, KERNEL_TOL,
};
use crate::states::{BipartiteDims, DensityMatrix};
use crate::Error;
use products::mixture;

/// Bisection width for the consumption point `t0`; reconstruction of the
/// structure needs weights far below the default boundary tolerance.
pub const STRUCTURE_BISECT_TOL: f64 = 1e-13;
const WEIGHT_ZERO: f64 = 1e-14;
const PS_CERTIFICATE_TOL: f64 = 1e-9;
/// `Λ` differences below this keep the original party order.
const LAMBDA_TIE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VectorTag {
    SeparableVec,
    EntangledVec,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TaggedVector {
    pub vector: Vec<C64>,
    pub tag: VectorTag,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleGroup {
    pub value: f64,
    pub vectors: Vec<TaggedVector>,
}

/// Eigen-ensemble with a product-maximizing basis in each eigenspace.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenEnsemble {
    pub dims: BipartiteDims,
    pub groups: Vec<EnsembleGroup>,
}

impl EigenEnsemble {
    /// `Σ λ_g Σ_v |v⟩⟨v|`
    pub fn reconstruct(&self) -> ComplexMatrix {
        mixture(&self.weighted(None), self.dims.total())
    }

    /// `(λ, v)` pairs, optionally restricted to one tag.
    pub fn weighted(&self, tag: Option<VectorTag>) -> Vec<(f64, Vec<C64>)> {
        self.groups
            .iter()
            .flat_map(|g| {
                g.vectors
                    .iter()
                    .filter(move |v| tag.is_none_or(|t| v.tag == t))
                    .map(move |v| (g.value, v.vector.clone()))
            })
            .collect()
    }
}

/// Splits the eigen-ensemble into separable and entangled eigenvectors,
/// choosing within each degenerate eigenspace as many mutually orthogonal
/// product vectors as the greedy search finds.
pub fn eigen_split(rho: &DensityMatrix) -> EigenEnsemble {
    let dims = rho.dims();
    let groups = rho
        .eig()
        .eigenspaces(EIGENSPACE_GAP)
        .into_iter()
        .filter(|space| space.value > KERNEL_TOL)
        .map(|space| {
            let (products, rest) = orthogonal_product_basis(&space.vectors, dims);
            let mut vectors: Vec<TaggedVector> = products
                .into_iter()
                .map(|vector| TaggedVector {
                    vector,
                    tag: VectorTag::SeparableVec,
                })
                .collect();
            for vector in rest {
                let tag = if is_product(&vector, dims) {
                    VectorTag::SeparableVec
                } else {
                    VectorTag::EntangledVec
                };
                vectors.push(TaggedVector { vector, tag });
            }
            EnsembleGroup {
                value: space.value,
                vectors,
            }
        })
        .collect();
    EigenEnsemble { dims, groups }
}

/// Result of consuming two weighted entangled vectors at `t0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairConsumption {
    /// Weighted vectors left in the entangled part (at most one).
    pub pe: Vec<(f64, Vec<C64>)>,
    /// Weighted vectors moved to the separable part.
    pub ps: Vec<(f64, Vec<C64>)>,
}

/// Three-branch consumption of `w1·P₁ + w2·P₂` given the separable mixing
/// point `t0` (weight of `ψ1`).
pub fn consume_pair(w1: f64, psi1: &[C64], w2: f64, psi2: &[C64], t0: f64) -> PairConsumption {
    let lhs = w1 * (1.0 - t0);
    let rhs = w2 * t0;
    let equal = (lhs - rhs).abs() <= 1e-15 * (lhs + rhs).max(1e-300);
    if equal {
        PairConsumption {
            pe: Vec::new(),
            ps: alloc::vec![(w1, psi1.to_vec()), (w2, psi2.to_vec())],
        }
    } else if lhs > rhs {
        let moved = w2 * t0 / (1.0 - t0);
        PairConsumption {
            pe: alloc::vec![(w1 - moved, psi1.to_vec())],
            ps: alloc::vec![(moved, psi1.to_vec()), (w2, psi2.to_vec())],
        }
    } else {
        let moved = w1 * (1.0 - t0) / t0;
        PairConsumption {
            pe: alloc::vec![(w2 - moved, psi2.to_vec())],
            ps: alloc::vec![(w1, psi1.to_vec()), (moved, psi2.to_vec())],
        }
    }
}

/// `ρ = Λ·ρ^PS + (1-Λ)·ρ^PE`.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureDecomposition {
    pub dims: BipartiteDims,
    /// `Λ`, weight of the purely separable part.
    pub lambda_ps: f64,
    pub ps: Option<DensityMatrix>,
    pub pe: Option<DensityMatrix>,
    /// Product decomposition of `ρ^PS` (weights sum to 1).
    pub ps_certificate: Vec<WeightedProduct>,
    pub pe_verdict: Option<SeparabilityVerdict>,
    /// Optimality evidence for `ρ^PE`.
    pub pe_note: String,
    pub notes: Vec<String>,
    /// Every separability question on the way was settled rigorously.
    pub certified: bool,
}

impl StructureDecomposition {
    /// `Λ·ρ^PS + (1-Λ)·ρ^PE`
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.dims.total();
        let mut m = ComplexMatrix::zeros(n, n);
        if let Some(ps) = &self.ps {
            m = m.lin_comb(1.0, ps.matrix(), self.lambda_ps);
        }
        if let Some(pe) = &self.pe {
            m = m.lin_comb(1.0, pe.matrix(), 1.0 - self.lambda_ps);
        }
        m
    }

    /// The same decomposition with the parties relabeled.
    pub fn swapped(self) -> Self {
        StructureDecomposition {
            dims: self.dims.swapped(),
            lambda_ps: self.lambda_ps,
            ps: self.ps.map(|m| m.swap_parties()),
            pe: self.pe.map(|m| m.swap_parties()),
            ps_certificate: self
                .ps_certificate
                .into_iter()
                .map(|p| WeightedProduct {
                    weight: p.weight,
                    left: p.right,
                    right: p.left,
                })
                .collect(),
            pe_verdict: self.pe_verdict,
            pe_note: self.pe_note,
            notes: self.notes,
            certified: self.certified,
        }
    }

    /// The decomposition if it is certified, otherwise
    /// [`Error::OracleUndecided`].
    pub fn certify(self) -> crate::Result<Self> {
        if self.certified {
            Ok(self)
        } else {
            Err(Error::OracleUndecided {
                context: "structure decomposition",
            })
        }
    }
}

enum PsPiece {
    Product(f64, Vec<C64>),
    Pair([(f64, Vec<C64>); 2]),
}

/// Decomposes `ρ` into its purely separable and purely entangled parts.
///
/// Steps: eigen split; pairwise relations between entangled eigenvectors;
/// consumption of pairs without a common witness at the boundary of their
/// separable interval, heaviest first; subtraction of maximal product
/// projectors from the range of the remainder. Questions the criteria cannot
/// settle are recorded in `notes` and clear `certified`.
///
/// Product-projector subtraction depends on which product vector is taken
/// first. When it runs, the state with the parties relabeled is decomposed
/// as well and the ordering with the larger `Λ` is kept, so the result
/// commutes with relabeling.
pub fn purely_decompose(rho: &DensityMatrix, opts: &Options) -> StructureDecomposition {
    let (direct, refined) = decompose_oriented(rho, opts);
    if !refined {
        return direct;
    }
    let (mirrored, _) = decompose_oriented(&rho.swap_parties(), opts);
    let mut mirrored = mirrored.swapped();
    if mirrored.lambda_ps > direct.lambda_ps + LAMBDA_TIE {
        mirrored
            .notes
            .push(String::from("taken from the decomposition with the parties relabeled"));
        mirrored
    } else {
        direct
    }
}

fn decompose_oriented(rho: &DensityMatrix, opts: &Options) -> (StructureDecomposition, bool) {
    let dims = rho.dims();
    let n = dims.total();
    let mut notes: Vec<String> = Vec::new();
    let mut certified = true;
    let ensemble = eigen_split(rho);

    let mut pieces: Vec<PsPiece> = ensemble
        .weighted(Some(VectorTag::SeparableVec))
        .into_iter()
        .map(|(w, v)| PsPiece::Product(w, v))
        .collect();
    let entangled = ensemble.weighted(Some(VectorTag::EntangledVec));
    let mut weights: Vec<f64> = entangled.iter().map(|(w, _)| *w).collect();

    // pairwise relations between entangled eigenvectors
    let k = entangled.len();
    let densities: Vec<DensityMatrix> = entangled
        .iter()
        .map(|(_, v)| DensityMatrix::from_parts(ComplexMatrix::projector(v), dims))
        .collect();
    let mut relation = alloc::vec![alloc::vec![PairRelation::CommonWitness; k]; k];
    for i in 0..k {
        for j in i + 1..k {
            let r = pair_relation(&densities[i], &densities[j], opts.psd_tol, STRUCTURE_BISECT_TOL);
            if let PairRelation::PptOnly(_) = r {
                certified = false;
                notes.push(format!(
                    "entangled eigenvectors {i} and {j}: PPT mixtures not certified separable, consumed PPT-relative"
                ));
            }
            relation[i][j] = r;
            relation[j][i] = flip(r);
        }
    }
    if k >= 3 && (0..k).all(|i| (0..k).all(|j| i == j || relation[i][j] == PairRelation::CommonWitness)) {
        if let Ok(answer) = crate::separability::common_witness_exists(&densities, opts) {
            if answer != crate::separability::WitnessAnswer::Yes {
                certified = false;
                notes.push(format!(
                    "common witness for all {k} entangled eigenvectors: {}",
                    answer.as_str()
                ));
            }
        }
    }

    // heaviest first, ties by index
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| weights[b].total_cmp(&weights[a]).then(a.cmp(&b)));
    for _ in 0..k * k + 1 {
        let mut progressed = false;
        for a in 0..k {
            for b in a + 1..k {
                let (i, j) = (order[a], order[b]);
                if weights[i] <= WEIGHT_ZERO || weights[j] <= WEIGHT_ZERO {
                    continue;
                }
                let interval = match relation[i][j] {
                    PairRelation::CommonWitness => continue,
                    PairRelation::Mixable(iv) | PairRelation::PptOnly(iv) => iv,
                };
                let ratio = weights[i] / (weights[i] + weights[j]);
                let t0 = if ratio > interval.high {
                    interval.high
                } else if ratio < interval.low {
                    interval.low
                } else {
                    ratio
                };
                let (vi, vj) = (&entangled[i].1, &entangled[j].1);
                let (wi, wj) = (weights[i], weights[j]);
                let c = consume_pair(wi, vi, wj, vj, t0);
                let (mut left_i, mut left_j) = (0.0, 0.0);
                for (w, v) in &c.pe {
                    if v == vi {
                        left_i = *w;
                    } else {
                        left_j = *w;
                    }
                }
                let moved_i = wi - left_i;
                let moved_j = wj - left_j;
                pieces.push(PsPiece::Pair([(moved_i, vi.clone()), (moved_j, vj.clone())]));
                weights[i] = if left_i <= WEIGHT_ZERO { 0.0 } else { left_i };
                weights[j] = if left_j <= WEIGHT_ZERO { 0.0 } else { left_j };
                progressed = true;
            }
        }
        if !progressed {
            break;
        }
    }

    let mut pe_matrix = mixture(
        &entangled
            .iter()
            .zip(&weights)
            .filter(|(_, w)| **w > 0.0)
            .map(|((_, v), w)| (*w, v.clone()))
            .collect::<Vec<_>>(),
        n,
    );

    // subtract maximal product projectors from the range of the remainder
    let mut refined = 0usize;
    let mut range_has_products = false;
    for _ in 0..n {
        let eig = hermitian_eig(&pe_matrix, f64::INFINITY).expect("Hermitian");
        let range: Vec<(f64, Vec<C64>)> = eig
            .values
            .iter()
            .zip(&eig.vectors)
            .filter(|(l, _)| **l > KERNEL_TOL)
            .map(|(l, v)| (*l, v.clone()))
            .collect();
        if range.is_empty() {
            range_has_products = false;
            break;
        }
        let basis: Vec<Vec<C64>> = range.iter().map(|(_, v)| v.clone()).collect();
        let Some(x) = product_vectors_in_subspace(&basis, dims).into_iter().next() else {
            range_has_products = false;
            break;
        };
        range_has_products = true;
        let inverse_expectation: f64 = range.iter().map(|(l, v)| inner(v, &x).norm_sqr() / l).sum();
        let delta = 1.0 / inverse_expectation;
        pe_matrix = pe_matrix
            .lin_comb(1.0, &ComplexMatrix::projector(&x), -delta)
            .hermitize();
        pieces.push(PsPiece::Product(delta, x));
        refined += 1;
    }
    if refined > 0 {
        notes.push(format!(
            "{refined} product projector(s) subtracted from the range of the entangled remainder"
        ));
    }

    let mut ps_matrix = ComplexMatrix::zeros(n, n);
    for piece in &pieces {
        match piece {
            PsPiece::Product(w, v) => ps_matrix = ps_matrix.lin_comb(1.0, &ComplexMatrix::projector(v), *w),
            PsPiece::Pair(terms) => {
                for (w, v) in terms {
                    ps_matrix = ps_matrix.lin_comb(1.0, &ComplexMatrix::projector(v), *w);
                }
            }
        }
    }
    let pe_weight = pe_matrix.trace().re;
    let (lambda_ps, pe_present) = if pe_weight <= KERNEL_TOL {
        (1.0, false)
    } else {
        (ps_matrix.trace().re.clamp(0.0, 1.0), true)
    };
    let ps_present = lambda_ps > KERNEL_TOL;
    let ps = ps_present.then(|| DensityMatrix::from_parts(ps_matrix.scale(1.0 / ps_matrix.trace().re), dims));
    let pe = pe_present.then(|| DensityMatrix::from_parts(pe_matrix.scale(1.0 / pe_weight), dims));

    let ps_certificate = match &ps {
        None => Vec::new(),
        Some(ps) => match product_basis_certificate(ps) {
            Some(c) => c,
            None => match explicit_certificate(&pieces, ps, dims) {
                Some(c) => c,
                None => {
                    certified = false;
                    notes.push(String::from("no product decomposition found for the separable part"));
                    Vec::new()
                }
            },
        },
    };

    let pe_verdict = pe.as_ref().map(|pe| verdict(pe, opts));
    if let Some(v) = &pe_verdict {
        if !v.is_entangled() {
            certified = false;
            notes.push(format!("entangled part verdict: {}", v.label()));
        }
    }
    let pe_note = if pe.is_none() {
        String::from("no entangled part")
    } else if !range_has_products {
        String::from("no product vector found in the range of the entangled part")
    } else {
        String::from("product vectors remain in the range of the entangled part")
    };

    let decomposition = StructureDecomposition {
        dims,
        lambda_ps,
        ps,
        pe,
        ps_certificate,
        pe_verdict,
        pe_note,
        notes,
        certified,
    };
    (decomposition, refined > 0)
}

fn flip(r: PairRelation) -> PairRelation {
    use crate::separability::SeparableInterval;
    let mirror = |iv: SeparableInterval| SeparableInterval {
        low: 1.0 - iv.high,
        high: 1.0 - iv.low,
    };
    match r {
        PairRelation::CommonWitness => PairRelation::CommonWitness,
        PairRelation::Mixable(iv) => PairRelation::Mixable(mirror(iv)),
        PairRelation::PptOnly(iv) => PairRelation::PptOnly(mirror(iv)),
    }
}

/// Product decomposition assembled from the pieces of the separable part.
/// A consumed pair `a·P₁ + b·P₂` is written over the product vectors of
/// `span{ψ₁, ψ₂}` when there are exactly two of them.
fn explicit_certificate(
    pieces: &[PsPiece],
    ps: &DensityMatrix,
    dims: BipartiteDims,
) -> Option<Vec<WeightedProduct>> {
    let total: f64 = ps_weight(pieces);
    let mut weighted: Vec<(f64, Vec<C64>)> = Vec::new();
    for piece in pieces {
        match piece {
            PsPiece::Product(w, v) => weighted.push((*w, v.clone())),
            PsPiece::Pair(terms) => {
                let basis = [terms[0].1.clone(), terms[1].1.clone()];
                let products = product_vectors_in_subspace(&basis, dims);
                if products.len() != 2 {
                    return None;
                }
                let target = mixture(terms, dims.total());
                let g = |a: &[C64], b: &[C64]| inner(a, b).norm_sqr();
                let (x, y) = (&products[0], &products[1]);
                let (gxx, gxy, gyy) = (g(x, x), g(x, y), g(y, y));
                let (rx, ry) = (target.expectation(x), target.expectation(y));
                let det = gxx * gyy - gxy * gxy;
                if det.abs() < 1e-14 {
                    return None;
                }
                let cx = (rx * gyy - ry * gxy) / det;
                let cy = (ry * gxx - rx * gxy) / det;
                if cx < -1e-12 || cy < -1e-12 {
                    return None;
                }
                weighted.push((cx.max(0.0), x.clone()));
                weighted.push((cy.max(0.0), y.clone()));
            }
        }
    }
    let mut out = Vec::new();
    for (w, v) in weighted {
        if w <= WEIGHT_ZERO {
            continue;
        }
        let (left, right) = split_product(&v, dims)?;
        out.push(WeightedProduct {
            weight: w / total,
            left,
            right,
        });
    }
    let rebuilt = product_mixture(&out)?;
    (rebuilt.max_abs_diff(ps.matrix()) <= PS_CERTIFICATE_TOL).then_some(out)
}

fn ps_weight(pieces: &[PsPiece]) -> f64 {
    pieces
        .iter()
        .map(|p| match p {
            PsPiece::Product(w, _) => *w,
            PsPiece::Pair(terms) => terms[0].0 + terms[1].0,
        })
        .sum()
}
