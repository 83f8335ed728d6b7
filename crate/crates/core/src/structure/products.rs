//! Product vectors inside a subspace.

use alloc::vec::Vec;
use core::cmp::Ordering;

// shadowed by inherent float methods when a dependency links std
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{
    basis_vector, hermitian_eig, inner, kron_vec, norm, normalized, schmidt_unchecked,
    span_projector, ComplexMatrix, C64,
};
use crate::states::BipartiteDims;

/// Fixed seed for the random starts of the alternating search.
pub const SEARCH_SEED: u64 = 0xB5A;
/// Number of random starts.
pub const SEARCH_STARTS: usize = 32;
/// Schmidt tolerance for calling a vector a product vector.
pub const PRODUCT_TOL: f64 = 1e-9;

const COEFF_ZERO: f64 = 1e-12;
const DUPLICATE_OVERLAP: f64 = 1.0 - 1e-6;
const MAX_ITERATIONS: usize = 5000;
const RESIDUAL_ACCEPT: f64 = 1e-9;

/// Splits a product vector into unit local factors `(a, b)` with
/// `v ≈ ‖v‖·a⊗b`, or `None` if its Schmidt rank exceeds one.
pub fn split_product(v: &[C64], dims: BipartiteDims) -> Option<(Vec<C64>, Vec<C64>)> {
    let unit = normalized(v)?;
    let form = schmidt_unchecked(&unit, dims);
    if form.rank(PRODUCT_TOL) != 1 {
        return None;
    }
    let mut left = form.left[0].clone();
    // put the residual phase of `unit` relative to left⊗right into `left`
    let right = form.right[0].clone();
    let phase = inner(&kron_vec(&left, &right), &unit);
    let phase = phase / phase.norm();
    for z in left.iter_mut() {
        *z *= phase;
    }
    Some((left, right))
}

pub fn is_product(v: &[C64], dims: BipartiteDims) -> bool {
    split_product(v, dims).is_some()
}

/// Product vectors in the span of an orthonormal `basis`, normalized,
/// phase-fixed, deduplicated and sorted.
///
/// Two-dimensional spans in 2×2 are solved exactly through the quadratic
/// `det(A + zB) = 0` on the reshaped basis vectors. Everything else uses
/// computational basis vectors that lie in the span plus alternating
/// local-vector maximization of the overlap with the span from
/// [`SEARCH_STARTS`] seeded random starts.
pub fn product_vectors_in_subspace(basis: &[Vec<C64>], dims: BipartiteDims) -> Vec<Vec<C64>> {
    let mut found = match basis.len() {
        0 => Vec::new(),
        1 => basis.iter().filter(|v| is_product(v, dims)).cloned().collect(),
        2 if dims.d_a() == 2 && dims.d_b() == 2 => quadratic_roots(&basis[0], &basis[1], dims),
        _ => alternating_search(basis, dims),
    };
    canonicalize(&mut found);
    found
}

/// Greedy choice of mutually orthogonal product vectors in the span of
/// `space`: computational basis vectors first, then repeated subspace
/// searches on the orthogonal remainder. Returns `(products, rest)`, where
/// `rest` is an orthonormal basis of what is left.
pub fn orthogonal_product_basis(
    space: &[Vec<C64>],
    dims: BipartiteDims,
) -> (Vec<Vec<C64>>, Vec<Vec<C64>>) {
    let n = dims.total();
    let mut rest: Vec<Vec<C64>> = space.to_vec();
    let mut chosen: Vec<Vec<C64>> = Vec::new();
    for index in 0..n {
        if rest.is_empty() {
            break;
        }
        let e = basis_vector(n, index);
        let weight: f64 = rest.iter().map(|v| inner(v, &e).norm_sqr()).sum();
        if weight >= 1.0 - 1e-12 {
            rest = remove_direction(&rest, &e, n);
            chosen.push(e);
        }
    }
    while !rest.is_empty() {
        let candidates = product_vectors_in_subspace(&rest, dims);
        let Some(x) = candidates.into_iter().next() else {
            break;
        };
        rest = remove_direction(&rest, &x, n);
        chosen.push(x);
    }
    (chosen, rest)
}

/// Orthonormal basis of `span(basis) ⊖ x` for a unit `x` in the span.
fn remove_direction(basis: &[Vec<C64>], x: &[C64], n: usize) -> Vec<Vec<C64>> {
    let p = &span_projector(basis, n) - &ComplexMatrix::projector(x);
    let eig = hermitian_eig(&p, f64::INFINITY).expect("projector is Hermitian");
    eig.values
        .iter()
        .zip(eig.vectors)
        .filter(|(l, _)| **l > 0.5)
        .map(|(_, v)| v)
        .collect()
}

fn quadratic_roots(v1: &[C64], v2: &[C64], dims: BipartiteDims) -> Vec<Vec<C64>> {
    let (a, b) = (v1, v2);
    let c0 = a[0] * a[3] - a[1] * a[2];
    let c2 = b[0] * b[3] - b[1] * b[2];
    let c1 = a[0] * b[3] + b[0] * a[3] - a[1] * b[2] - b[1] * a[2];
    let combine = |z: C64| -> Vec<C64> { a.iter().zip(b).map(|(x, y)| x + z * y).collect() };

    let mut out: Vec<Vec<C64>> = Vec::new();
    if c0.norm() <= COEFF_ZERO && c1.norm() <= COEFF_ZERO && c2.norm() <= COEFF_ZERO {
        // every vector of the span is a product vector
        out.push(v1.to_vec());
        out.push(v2.to_vec());
    } else if c2.norm() <= COEFF_ZERO {
        // root at z = ∞
        out.push(v2.to_vec());
        if c1.norm() > COEFF_ZERO {
            out.push(combine(-c0 / c1));
        }
    } else {
        let disc = (c1 * c1 - c0 * c2 * 4.0).sqrt();
        for s in [disc, -disc] {
            out.push(combine((-c1 + s) / (c2 * 2.0)));
        }
    }
    out.into_iter()
        .filter_map(|v| normalized(&v))
        .filter(|v| is_product(v, dims))
        .collect()
}

fn alternating_search(basis: &[Vec<C64>], dims: BipartiteDims) -> Vec<Vec<C64>> {
    let n = dims.total();
    let p = span_projector(basis, n);
    let mut found: Vec<Vec<C64>> = Vec::new();
    for v in basis {
        if is_product(v, dims) {
            found.push(v.clone());
        }
    }
    for index in 0..n {
        let e = basis_vector(n, index);
        if norm(&p.mul_vec(&e)) >= 1.0 - 1e-12 {
            found.push(e);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEARCH_SEED);
    for _ in 0..SEARCH_STARTS {
        let a = random_unit(&mut rng, dims.d_a());
        let b = random_unit(&mut rng, dims.d_b());
        if let Some(x) = polish(&p, dims, a, b) {
            found.push(x);
        }
    }
    found
}

fn random_unit(rng: &mut ChaCha8Rng, d: usize) -> Vec<C64> {
    let v: Vec<C64> = (0..d)
        .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    normalized(&v).unwrap_or_else(|| basis_vector(d, 0))
}

/// Alternating maximization of `⟨a⊗b|P|a⊗b⟩`. Returns `P(a⊗b)` normalized
/// when `a⊗b` converges into the span.
fn polish(p: &ComplexMatrix, dims: BipartiteDims, mut a: Vec<C64>, mut b: Vec<C64>) -> Option<Vec<C64>> {
    let mut last = f64::INFINITY;
    for iteration in 0..MAX_ITERATIONS {
        a = top_eigenvector(&contract_right(p, dims, &b));
        b = top_eigenvector(&contract_left(p, dims, &a));
        let x = kron_vec(&a, &b);
        let px = p.mul_vec(&x);
        let residual = norm(&x.iter().zip(&px).map(|(u, v)| u - v).collect::<Vec<_>>());
        if residual <= 1e-13 {
            return normalized(&px);
        }
        if iteration > 10 && residual > last * (1.0 - 1e-6) {
            return if residual <= RESIDUAL_ACCEPT {
                normalized(&px)
            } else {
                None
            };
        }
        last = residual;
    }
    if last <= RESIDUAL_ACCEPT {
        normalized(&p.mul_vec(&kron_vec(&a, &b)))
    } else {
        None
    }
}

/// `(I ⊗ ⟨b|) M (I ⊗ |b⟩)`
fn contract_right(m: &ComplexMatrix, dims: BipartiteDims, b: &[C64]) -> ComplexMatrix {
    let (da, db) = (dims.d_a(), dims.d_b());
    ComplexMatrix::from_fn(da, da, |i, k| {
        let mut s = C64::new(0.0, 0.0);
        for j in 0..db {
            for l in 0..db {
                s += b[j].conj() * m[(i * db + j, k * db + l)] * b[l];
            }
        }
        s
    })
}

/// `(⟨a| ⊗ I) M (|a⟩ ⊗ I)`
fn contract_left(m: &ComplexMatrix, dims: BipartiteDims, a: &[C64]) -> ComplexMatrix {
    let (da, db) = (dims.d_a(), dims.d_b());
    ComplexMatrix::from_fn(db, db, |j, l| {
        let mut s = C64::new(0.0, 0.0);
        for i in 0..da {
            for k in 0..da {
                s += a[i].conj() * m[(i * db + j, k * db + l)] * a[k];
            }
        }
        s
    })
}

fn top_eigenvector(m: &ComplexMatrix) -> Vec<C64> {
    let eig = hermitian_eig(&m.hermitize(), f64::INFINITY).expect("Hermitian");
    eig.vectors.into_iter().next().expect("non-empty")
}

/// Phase-fixes, drops duplicates and sorts by descending amplitudes.
fn canonicalize(vectors: &mut Vec<Vec<C64>>) {
    for v in vectors.iter_mut() {
        crate::linalg::fix_phase(v);
    }
    let mut unique: Vec<Vec<C64>> = Vec::new();
    for v in vectors.drain(..) {
        if unique.iter().all(|u| inner(u, &v).norm() <= DUPLICATE_OVERLAP) {
            unique.push(v);
        }
    }
    unique.sort_by(|x, y| amplitude_order(x, y));
    *vectors = unique;
}

/// Lexicographic order on amplitudes rounded to 1e-9, larger first.
pub(crate) fn amplitude_order(x: &[C64], y: &[C64]) -> Ordering {
    let key = |z: &C64| ((z.re * 1e9).round() as i64, (z.im * 1e9).round() as i64);
    for (u, v) in x.iter().zip(y) {
        match key(v).cmp(&key(u)) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

/// `Σ_i w_i |x_i⟩⟨x_i|`
pub(crate) fn mixture(weighted: &[(f64, Vec<C64>)], n: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n, n);
    for (w, x) in weighted {
        m = m.lin_comb(1.0, &ComplexMatrix::projector(x), *w);
    }
    m
}
