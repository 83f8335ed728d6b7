/// Numerical knobs shared by the search routines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Options {
    /// `λ_min ≥ -psd_tol` counts as positive semidefinite.
    pub psd_tol: f64,
    /// Width at which boundary bisection stops.
    pub bisect_tol: f64,
    /// Grid points for CCNR boundary scans.
    pub grid: usize,
    /// Robustness cap; larger values are reported as infinite.
    pub t_max: f64,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            psd_tol: 1e-9,
            bisect_tol: 1e-7,
            grid: 512,
            t_max: 1e6,
        }
    }
}

/// Separability criterion used for boundary searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Criterion {
    /// Positive partial transpose.
    Ppt,
    /// Computable cross-norm / realignment.
    Ccnr,
    /// Certified separability: PPT where it is exact (`d_A·d_B ≤ 6`),
    /// undecided elsewhere unless another certificate settles it.
    Exact,
}

impl Criterion {
    pub fn as_str(self) -> &'static str {
        match self {
            Criterion::Ppt => "ppt",
            Criterion::Ccnr => "ccnr",
            Criterion::Exact => "exact",
        }
    }
}
