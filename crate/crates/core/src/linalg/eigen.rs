use alloc::vec::Vec;

// shadowed by inherent float methods when a dependency links std
#[allow(unused_imports)]
use num_traits::Float;

use super::{fix_phase, ComplexMatrix, C64, ZERO};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;
const OFF_DIAGONAL_TOL: f64 = 1e-14;

/// Eigenvalues sorted descending with column-aligned orthonormal
/// eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<C64>>,
}

/// A group of (numerically) degenerate eigenvalues and an orthonormal basis
/// of the eigenspace.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenspace {
    pub value: f64,
    pub vectors: Vec<Vec<C64>>,
}

impl EigenSystem {
    pub fn min(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `Σ λ_i v_i v_i†`
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.values.len();
        let mut m = ComplexMatrix::zeros(n, n);
        for (lambda, v) in self.values.iter().zip(&self.vectors) {
            for i in 0..n {
                for j in 0..n {
                    m[(i, j)] += v[i] * v[j].conj() * *lambda;
                }
            }
        }
        m
    }

    /// Groups eigenvalues whose gap to the previous member is within
    /// `rel_gap · max(1, |λ_max|)`. The group value is the mean of its members.
    pub fn eigenspaces(&self, rel_gap: f64) -> Vec<Eigenspace> {
        let scale = self
            .values
            .iter()
            .map(|x| x.abs())
            .fold(1.0f64, f64::max);
        let mut out: Vec<Eigenspace> = Vec::new();
        let mut members = 0usize;
        for (i, (&value, v)) in self.values.iter().zip(&self.vectors).enumerate() {
            let joins = i > 0 && (self.values[i - 1] - value).abs() <= rel_gap * scale;
            if joins {
                let last = out.last_mut().expect("group exists");
                last.value = (last.value * members as f64 + value) / (members as f64 + 1.0);
                last.vectors.push(v.clone());
                members += 1;
            } else {
                out.push(Eigenspace {
                    value,
                    vectors: alloc::vec![v.clone()],
                });
                members = 1;
            }
        }
        out
    }
}

/// Cyclic Jacobi eigendecomposition of a Hermitian matrix.
///
/// Each rotation first removes the phase of `a_pq`, then applies the real
/// symmetric Schur rotation. Eigenvalues come back sorted descending and
/// each eigenvector has its first non-negligible component real positive, so
/// the output is a deterministic function of the input.
pub fn hermitian_eig(m: &ComplexMatrix, tol: f64) -> Result<EigenSystem> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let deviation = m.hermitian_deviation();
    if deviation > tol {
        return Err(Error::NotHermitian { deviation });
    }
    let n = m.rows();
    let mut a = m.hermitize();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm().max(1e-300);

    for _ in 0..MAX_SWEEPS {
        if off_diagonal(&a) <= OFF_DIAGONAL_TOL * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re).then(i.cmp(&j)));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = order
        .iter()
        .map(|&j| {
            let mut col = v.column(j);
            fix_phase(&mut col);
            col
        })
        .collect();
    Ok(EigenSystem { values, vectors })
}

/// Eigenvalues only, sorted descending.
pub(crate) fn hermitian_eigvals(m: &ComplexMatrix) -> Vec<f64> {
    hermitian_eig(m, f64::INFINITY)
        .map(|e| e.values)
        .unwrap_or_default()
}

fn off_diagonal(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let g = apq.norm();
    if g == 0.0 {
        return;
    }
    let e = apq / g;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let tau = (aqq - app) / (2.0 * g);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let ec = e.conj();
    // U restricted to (p, q): [[c, s], [-s·e*, c·e*]]
    let (u_pp, u_pq, u_qp, u_qq) = (C64::new(c, 0.0), C64::new(s, 0.0), -ec * s, ec * c);

    let n = a.rows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * u_pp + akq * u_qp;
        a[(k, q)] = akp * u_pq + akq * u_qq;
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * u_pp + vkq * u_qp;
        v[(k, q)] = vkp * u_pq + vkq * u_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = u_pp.conj() * apk + u_qp.conj() * aqk;
        a[(q, k)] = u_pq.conj() * apk + u_qq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
}
