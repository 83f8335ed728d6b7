//! Validated bipartite states and the state families used throughout the
//! crate.
//!
//! Basis convention: the computational product basis `|i⟩_A|j⟩_B` sits at
//! index `i·d_B + j`.

use alloc::vec;
use alloc::vec::Vec;

// shadowed by inherent float methods when a dependency links std
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Invariant, Result};
use crate::linalg::{self, basis_vector, hermitian_eig, kron_vec, ComplexMatrix, EigenSystem, C64, ZERO};

/// Default validation tolerance for [`DensityMatrix`].
pub const DEFAULT_TOL: f64 = 1e-9;

/// Local dimensions `(d_A, d_B)`, each at least 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BipartiteDims {
    d_a: usize,
    d_b: usize,
}

impl BipartiteDims {
    pub fn new(d_a: usize, d_b: usize) -> Result<Self> {
        if d_a < 2 || d_b < 2 {
            return Err(Error::InvalidDims { d_a, d_b });
        }
        Ok(BipartiteDims { d_a, d_b })
    }

    pub fn d_a(self) -> usize {
        self.d_a
    }

    pub fn d_b(self) -> usize {
        self.d_b
    }

    pub fn total(self) -> usize {
        self.d_a * self.d_b
    }

    pub fn swapped(self) -> Self {
        BipartiteDims {
            d_a: self.d_b,
            d_b: self.d_a,
        }
    }

    /// PPT is necessary and sufficient for separability here.
    pub fn ppt_is_exact(self) -> bool {
        self.total() <= 6
    }

    /// Index of `|i⟩_A|j⟩_B`.
    pub fn index(self, i: usize, j: usize) -> usize {
        i * self.d_b + j
    }
}

/// Hermitian, positive semidefinite, unit-trace matrix on `C^{d_A} ⊗ C^{d_B}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    dims: BipartiteDims,
    tol: f64,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix, dims: BipartiteDims) -> Result<Self> {
        Self::with_tol(matrix, dims, DEFAULT_TOL)
    }

    /// Validates shape, finiteness, Hermiticity, trace and positivity, in that
    /// order, each within `tol`.
    pub fn with_tol(matrix: ComplexMatrix, dims: BipartiteDims, tol: f64) -> Result<Self> {
        let d = dims.total();
        if matrix.rows() != d || matrix.cols() != d {
            return Err(Error::Validation {
                invariant: Invariant::Shape,
            });
        }
        if matrix
            .as_slice()
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::Validation {
                invariant: Invariant::Finite,
            });
        }
        if matrix.hermitian_deviation() > tol {
            return Err(Error::Validation {
                invariant: Invariant::Hermitian,
            });
        }
        if (matrix.trace().re - 1.0).abs() > tol {
            return Err(Error::Validation {
                invariant: Invariant::Trace,
            });
        }
        let eig = hermitian_eig(&matrix, f64::INFINITY)?;
        if eig.min() < -tol {
            return Err(Error::Validation {
                invariant: Invariant::Positivity,
            });
        }
        Ok(DensityMatrix { matrix, dims, tol })
    }

    /// For operators built from already-valid states (mixtures, normalized
    /// parts). Hermitizes to remove round-off asymmetry.
    pub(crate) fn from_parts(matrix: ComplexMatrix, dims: BipartiteDims) -> Self {
        debug_assert_eq!(matrix.rows(), dims.total());
        DensityMatrix {
            matrix: matrix.hermitize(),
            dims,
            tol: DEFAULT_TOL,
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn dim(&self) -> usize {
        self.dims.total()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn eig(&self) -> EigenSystem {
        hermitian_eig(&self.matrix, f64::INFINITY).expect("validated Hermitian")
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eig().min()
    }

    /// `t·self + (1-t)·other`
    pub fn mix(&self, t: f64, other: &DensityMatrix) -> Result<DensityMatrix> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(Self::from_parts(
            self.matrix.lin_comb(t, &other.matrix, 1.0 - t),
            self.dims,
        ))
    }

    /// Relabels `A ↔ B`.
    pub fn swap_parties(&self) -> DensityMatrix {
        let dims = self.dims;
        let (da, db) = (dims.d_a(), dims.d_b());
        let perm = |r: usize| {
            let (i, j) = (r / db, r % db);
            j * da + i
        };
        let mut m = ComplexMatrix::zeros(dims.total(), dims.total());
        for r in 0..dims.total() {
            for c in 0..dims.total() {
                m[(perm(r), perm(c))] = self.matrix[(r, c)];
            }
        }
        DensityMatrix {
            matrix: m,
            dims: dims.swapped(),
            tol: self.tol,
        }
    }

    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        self.matrix.max_abs_diff(&other.matrix)
    }
}

/// Unit vector on `C^{d_A} ⊗ C^{d_B}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: Vec<C64>,
    dims: BipartiteDims,
}

impl PureState {
    pub fn new(amplitudes: Vec<C64>, dims: BipartiteDims) -> Result<Self> {
        if amplitudes.len() != dims.total() {
            return Err(Error::DimensionMismatch {
                expected: dims.total(),
                found: amplitudes.len(),
            });
        }
        let n = linalg::norm(&amplitudes);
        if (n - 1.0).abs() > 1e-10 {
            return Err(Error::NotNormalized { norm: n });
        }
        Ok(PureState { amplitudes, dims })
    }

    /// Normalizes `amplitudes` first.
    pub fn normalize(amplitudes: Vec<C64>, dims: BipartiteDims) -> Result<Self> {
        let v = linalg::normalized(&amplitudes).ok_or(Error::NotNormalized { norm: 0.0 })?;
        Self::new(v, dims)
    }

    pub fn product(a: &[C64], b: &[C64]) -> Result<Self> {
        let dims = BipartiteDims::new(a.len(), b.len())?;
        Self::normalize(kron_vec(a, b), dims)
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::projector(&self.amplitudes)
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_parts(self.projector(), self.dims)
    }
}

/// The affine family `ρ_t = t·pe + (1-t)·ps`, `t ∈ [0,1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyLine {
    pub pe: DensityMatrix,
    pub ps: DensityMatrix,
}

impl FamilyLine {
    pub fn new(pe: DensityMatrix, ps: DensityMatrix) -> Result<Self> {
        if pe.dims() != ps.dims() {
            return Err(Error::DimensionMismatch {
                expected: pe.dim(),
                found: ps.dim(),
            });
        }
        Ok(FamilyLine { pe, ps })
    }

    pub fn dims(&self) -> BipartiteDims {
        self.pe.dims()
    }

    pub fn state_at(&self, t: f64) -> Result<DensityMatrix> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::OutOfRange { name: "t", value: t });
        }
        Ok(DensityMatrix::from_parts(self.matrix_at(t), self.dims()))
    }

    pub(crate) fn matrix_at(&self, t: f64) -> ComplexMatrix {
        self.pe.matrix().lin_comb(t, self.ps.matrix(), 1.0 - t)
    }
}

fn check_range(name: &'static str, value: f64, lo: f64, hi: f64) -> Result<()> {
    if value.is_nan() || value < lo || value > hi {
        return Err(Error::OutOfRange { name, value });
    }
    Ok(())
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn dims(d_a: usize, d_b: usize) -> BipartiteDims {
    BipartiteDims::new(d_a, d_b).expect("static dims")
}

/// `Σ_i |ii⟩ / √d`
pub fn max_entangled(d: usize) -> PureState {
    let dims = dims(d, d);
    let mut v = vec![ZERO; dims.total()];
    let amp = 1.0 / (d as f64).sqrt();
    for i in 0..d {
        v[dims.index(i, i)] = real(amp);
    }
    PureState::new(v, dims).expect("unit vector")
}

/// `I / (d_A d_B)`
pub fn max_mixed(dims: BipartiteDims) -> DensityMatrix {
    let d = dims.total();
    DensityMatrix::from_parts(ComplexMatrix::identity(d).scale(1.0 / d as f64), dims)
}

/// `|10⟩, |01⟩, (|00⟩−|11⟩)/√2, (|00⟩+|11⟩)/√2`, the eigenbasis of the Werner
/// state in that order.
pub fn bell_basis() -> [PureState; 4] {
    let d = dims(2, 2);
    let h = 0.5f64.sqrt();
    let v = |a: [f64; 4]| PureState::new(a.iter().map(|&x| real(x)).collect(), d).expect("unit vector");
    [
        v([0.0, 0.0, 1.0, 0.0]),
        v([0.0, 1.0, 0.0, 0.0]),
        v([h, 0.0, 0.0, -h]),
        v([h, 0.0, 0.0, h]),
    ]
}

/// `p|ψ+⟩⟨ψ+| + (1-p) I/4`
pub fn werner(p: f64) -> Result<DensityMatrix> {
    check_range("p", p, 0.0, 1.0)?;
    let d = dims(2, 2);
    max_entangled(2).density().mix(p, &max_mixed(d))
}

fn weighted_basis_projectors(pairs: &[(usize, usize)], weight: f64, dims: BipartiteDims) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dims.total(), dims.total());
    for &(i, j) in pairs {
        let k = dims.index(i, j);
        m[(k, k)] = real(weight);
    }
    m
}

/// `(|01⟩⟨01| + |12⟩⟨12| + |20⟩⟨20|)/3`
pub fn sigma_plus() -> DensityMatrix {
    let d = dims(3, 3);
    DensityMatrix::from_parts(weighted_basis_projectors(&[(0, 1), (1, 2), (2, 0)], 1.0 / 3.0, d), d)
}

/// `(|10⟩⟨10| + |21⟩⟨21| + |02⟩⟨02|)/3`
pub fn sigma_minus() -> DensityMatrix {
    let d = dims(3, 3);
    DensityMatrix::from_parts(weighted_basis_projectors(&[(1, 0), (2, 1), (0, 2)], 1.0 / 3.0, d), d)
}

/// `Ω_α = (α/5)σ₊ + ((5-α)/5)σ₋`, the separable endpoint of the Horodecki
/// family.
pub fn omega_alpha(alpha: f64) -> Result<DensityMatrix> {
    check_range("alpha", alpha, 0.0, 5.0)?;
    sigma_plus().mix(alpha / 5.0, &sigma_minus())
}

/// `σ_α = (2/7)|Ψ+⟩⟨Ψ+| + (α/7)σ₊ + ((5-α)/7)σ₋`
pub fn horodecki_sigma(alpha: f64) -> Result<DensityMatrix> {
    check_range("alpha", alpha, 0.0, 5.0)?;
    let m = max_entangled(3)
        .projector()
        .scale(2.0 / 7.0)
        .lin_comb(1.0, sigma_plus().matrix(), alpha / 7.0)
        .lin_comb(1.0, sigma_minus().matrix(), (5.0 - alpha) / 7.0);
    Ok(DensityMatrix::from_parts(m, dims(3, 3)))
}

/// The Horodecki family line `(|Ψ+⟩⟨Ψ+|, Ω_α)`.
pub fn horodecki_line(alpha: f64) -> Result<FamilyLine> {
    FamilyLine::new(max_entangled(3).density(), omega_alpha(alpha)?)
}

/// `σ_α^t = t|Ψ+⟩⟨Ψ+| + (1-t)Ω_α`
pub fn horodecki_family(alpha: f64, t: f64) -> Result<DensityMatrix> {
    check_range("t", t, 0.0, 1.0)?;
    horodecki_line(alpha)?.state_at(t)
}

/// Projector onto `{|01⟩, |02⟩, |10⟩, |12⟩, |21⟩}` (rank 5).
pub fn q_operator() -> ComplexMatrix {
    weighted_basis_projectors(&[(0, 1), (0, 2), (1, 0), (1, 2), (2, 1)], 1.0, dims(3, 3))
}

/// `|Φ_a⟩ = |2⟩ ⊗ (√((1+a)/2)|0⟩ + √((1-a)/2)|2⟩)`
pub fn phi_a(a: f64) -> Result<PureState> {
    check_range("a", a, 0.0, 1.0)?;
    let local = [real(((1.0 + a) / 2.0).sqrt()), ZERO, real(((1.0 - a) / 2.0).sqrt())];
    PureState::product(&basis_vector(3, 2), &local)
}

/// `Q₊^a = (5a/(5a+1))·Q/5 + (1/(5a+1))|Φ_a⟩⟨Φ_a|`
pub fn q_plus(a: f64) -> Result<DensityMatrix> {
    if !(a > 0.0 && a <= 1.0) {
        return Err(Error::OutOfRange { name: "a", value: a });
    }
    let m = q_operator()
        .scale(a / (5.0 * a + 1.0))
        .lin_comb(1.0, &phi_a(a)?.projector(), 1.0 / (5.0 * a + 1.0));
    Ok(DensityMatrix::from_parts(m, dims(3, 3)))
}

/// The line `(|Ψ+⟩⟨Ψ+|, Q₊^a)`.
pub fn varrho_line(a: f64) -> Result<FamilyLine> {
    FamilyLine::new(max_entangled(3).density(), q_plus(a)?)
}

/// `ϱ_a^t = t|Ψ+⟩⟨Ψ+| + (1-t)Q₊^a`; the state `ϱ_a` itself sits at
/// `t = 3a/(8a+1)`.
pub fn varrho_family(a: f64, t: f64) -> Result<DensityMatrix> {
    check_range("t", t, 0.0, 1.0)?;
    varrho_line(a)?.state_at(t)
}

/// `ϱ_a`
pub fn varrho(a: f64) -> Result<DensityMatrix> {
    varrho_family(a, 3.0 * a / (8.0 * a + 1.0))
}

/// `ρ_m = ½|ψ+⟩⟨ψ+| + ½|φ⟩⟨φ|` with `|φ⟩ = (|10⟩ + |11⟩)/√2`.
pub fn rho_m() -> DensityMatrix {
    let h = 0.5f64.sqrt();
    let phi = PureState::new(vec![ZERO, ZERO, real(h), real(h)], dims(2, 2)).expect("unit vector");
    max_entangled(2).density().mix(0.5, &phi.density()).expect("same dims")
}
