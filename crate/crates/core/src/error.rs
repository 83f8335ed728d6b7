use core::fmt;

/// Which [`DensityMatrix`](crate::DensityMatrix) invariant failed validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Invariant {
    Shape,
    Finite,
    Hermitian,
    Trace,
    Positivity,
}

impl Invariant {
    pub fn as_str(self) -> &'static str {
        match self {
            Invariant::Shape => "shape",
            Invariant::Finite => "finite",
            Invariant::Hermitian => "hermitian",
            Invariant::Trace => "trace",
            Invariant::Positivity => "positivity",
        }
    }
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |m - m^dagger| = {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("local dimensions must be at least 2, got ({d_a}, {d_b})")]
    InvalidDims { d_a: usize, d_b: usize },
    #[error("vector norm {norm} differs from 1")]
    NotNormalized { norm: f64 },
    #[error("{name} = {value} is out of range")]
    OutOfRange { name: &'static str, value: f64 },
    #[error("state validation failed: {invariant}")]
    Validation { invariant: Invariant },
    #[error("no separable point on the family line")]
    NoSeparablePoint,
    #[error("input state {index} is not certified entangled")]
    InputNotEntangled { index: usize },
    #[error("states are incomparable: the support of the second exceeds the first")]
    Incomparable,
    #[error("separability criteria are not decisive: {context}")]
    OracleUndecided { context: &'static str },
    #[error("pure state is a product state")]
    ProductState,
}

pub type Result<T> = core::result::Result<T, Error>;
