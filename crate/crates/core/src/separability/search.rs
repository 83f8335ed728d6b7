//! Boundary search along affine families.
//!
//! Both criterion indicators are concave in `t` along any line
//! `ρ_t = t·pe + (1-t)·ps`: `λ_min(PT(ρ_t))` is the minimum of affine
//! functions, and `1 - ‖R(ρ_t)‖₁` is one minus a norm of an affine map. The
//! criterion-separable set `{t : indicator(t) ≥ 0}` is therefore an interval,
//! located by golden-section maximization followed by bisection on each side.

use alloc::vec::Vec;

use super::{ccnr_norm_of, ppt_min_eig_of};
use crate::error::{Error, Result};
use crate::options::{Criterion, Options};
use crate::states::FamilyLine;

const INV_PHI: f64 = 0.618_033_988_749_894_8;
const GOLDEN_TOL: f64 = 1e-13;
const MAX_BISECTIONS: usize = 200;

/// Criterion-separable interval `[low, high]` along a family line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparableInterval {
    pub low: f64,
    pub high: f64,
}

impl SeparableInterval {
    pub fn contains(&self, t: f64) -> bool {
        self.low <= t && t <= self.high
    }

    pub fn width(&self) -> f64 {
        self.high - self.low
    }
}

/// Maximizes a unimodal function on `[a, b]`; returns `(argmax, max)`.
/// Endpoints are compared explicitly so boundary maxima are exact.
pub fn golden_max(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > GOLDEN_TOL {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
    }
    let mut best = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    for x in [a, b] {
        let fx = f(x);
        if fx >= best.1 {
            best = (x, fx);
        }
    }
    best
}

/// Bisects between a point where `inside(x)` holds and one where it does not,
/// until they are within `tol`. Returns the last point known to be inside.
pub fn bisect(inside: &impl Fn(f64) -> bool, mut yes: f64, mut no: f64, tol: f64) -> f64 {
    for _ in 0..MAX_BISECTIONS {
        if (yes - no).abs() <= tol {
            break;
        }
        let mid = 0.5 * (yes + no);
        if mid == yes || mid == no {
            break;
        }
        if inside(mid) {
            yes = mid;
        } else {
            no = mid;
        }
    }
    yes
}

/// `{t ∈ [0,1] : f(t) ≥ 0}` for concave `f`.
///
/// Existence is decided with slack `psd_tol`. When the maximum lies within
/// `±psd_tol` of zero the set is a touching point and collapses to the
/// maximizer; otherwise each end is the zero crossing of `f`, located to
/// `bisect_tol`. The domain ends count as inside when `f ≥ -psd_tol` there.
pub fn concave_interval(
    f: &impl Fn(f64) -> f64,
    psd_tol: f64,
    bisect_tol: f64,
) -> Option<SeparableInterval> {
    let (t_best, f_best) = golden_max(f, 0.0, 1.0);
    if f_best < -psd_tol {
        return None;
    }
    if f_best <= psd_tol {
        return Some(SeparableInterval {
            low: t_best,
            high: t_best,
        });
    }
    let inside = |t: f64| f(t) >= 0.0;
    let low = if f(0.0) >= -psd_tol {
        0.0
    } else {
        bisect(&inside, t_best, 0.0, bisect_tol)
    };
    let high = if f(1.0) >= -psd_tol {
        1.0
    } else {
        bisect(&inside, t_best, 1.0, bisect_tol)
    };
    Some(SeparableInterval { low, high })
}

/// Concave separability indicator of `criterion` along `line`:
/// `λ_min(PT(ρ_t))` for PPT, `1 - ‖R(ρ_t)‖₁` for CCNR.
pub fn indicator(line: &FamilyLine, criterion: Criterion) -> impl Fn(f64) -> f64 + '_ {
    let dims = line.dims();
    move |t| {
        let m = line.matrix_at(t);
        match criterion {
            Criterion::Ccnr => 1.0 - ccnr_norm_of(&m, dims),
            Criterion::Ppt | Criterion::Exact => ppt_min_eig_of(&m, dims),
        }
    }
}

pub(crate) fn criterion_interval(
    line: &FamilyLine,
    criterion: Criterion,
    psd_tol: f64,
    bisect_tol: f64,
) -> Option<SeparableInterval> {
    concave_interval(&indicator(line, criterion), psd_tol, bisect_tol)
}

/// Criterion-relative separable interval along `line`.
///
/// `Exact` is PPT where PPT is decisive (`d_A·d_B ≤ 6`). Above that an empty
/// PPT or CCNR interval still proves that no point is separable; otherwise
/// the answer is [`Error::OracleUndecided`].
pub fn min_separable_weight(
    line: &FamilyLine,
    criterion: Criterion,
    opts: &Options,
) -> Result<SeparableInterval> {
    let found = match criterion {
        Criterion::Ppt | Criterion::Ccnr => {
            criterion_interval(line, criterion, opts.psd_tol, opts.bisect_tol)
        }
        Criterion::Exact => {
            let ppt = criterion_interval(line, Criterion::Ppt, opts.psd_tol, opts.bisect_tol);
            if line.dims().ppt_is_exact() || ppt.is_none() {
                ppt
            } else {
                let ccnr = criterion_interval(line, Criterion::Ccnr, opts.psd_tol, opts.bisect_tol);
                match (ppt, ccnr) {
                    (Some(p), Some(c)) if p.low.max(c.low) <= p.high.min(c.high) => {
                        return Err(Error::OracleUndecided {
                            context: "separable interval above 2x3",
                        })
                    }
                    _ => None,
                }
            }
        }
    };
    found.ok_or(Error::NoSeparablePoint)
}

/// Sign changes of the CCNR indicator on a uniform grid of `opts.grid`
/// points, each refined by bisection. Every crossing is reported.
pub fn ccnr_crossings(line: &FamilyLine, opts: &Options) -> Vec<f64> {
    let g = indicator(line, Criterion::Ccnr);
    let h = |t: f64| g(t) + opts.psd_tol;
    let n = opts.grid.max(2);
    let ts: Vec<f64> = (0..n).map(|k| k as f64 / (n - 1) as f64).collect();
    let values: Vec<f64> = ts.iter().map(|&t| h(t)).collect();
    let mut out = Vec::new();
    for k in 0..n - 1 {
        let (a, b) = (values[k] >= 0.0, values[k + 1] >= 0.0);
        if a != b {
            let (yes, no) = if a { (ts[k], ts[k + 1]) } else { (ts[k + 1], ts[k]) };
            out.push(bisect(&|t| h(t) >= 0.0, yes, no, opts.bisect_tol));
        }
    }
    out
}

/// Boundary points of the criterion-separable set that lie inside the
/// family: the low end if it is above 0, the high end if it is below 1.
pub fn interval_crossings(interval: Option<SeparableInterval>) -> Vec<f64> {
    let mut out = Vec::new();
    if let Some(iv) = interval {
        if iv.low > 0.0 && iv.low < iv.high {
            out.push(iv.low);
        }
        if iv.high < 1.0 {
            out.push(iv.high);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{bell_basis, horodecki_line, max_entangled, max_mixed, sigma_plus, werner, BipartiteDims};

    fn opts() -> Options {
        Options::default()
    }

    #[test]
    fn golden_finds_interior_and_boundary_maxima() {
        let (x, fx) = golden_max(&|t: f64| -(t - 0.3) * (t - 0.3), 0.0, 1.0);
        assert!((x - 0.3).abs() < 1e-6 && fx.abs() < 1e-12);
        let (x, _) = golden_max(&|t: f64| -t, 0.0, 1.0);
        assert_eq!(x, 0.0);
    }

    #[test]
    fn werner_line_ppt_interval() {
        let line = FamilyLine::new(max_entangled(2).density(), max_mixed(BipartiteDims::new(2, 2).unwrap())).unwrap();
        let iv = min_separable_weight(&line, Criterion::Ppt, &opts()).unwrap();
        assert_eq!(iv.low, 0.0);
        assert!((iv.high - 1.0 / 3.0).abs() < 1e-7);
        let exact = min_separable_weight(&line, Criterion::Exact, &opts()).unwrap();
        assert_eq!(exact, iv);
        // the state at t = p is werner(p)
        let w = werner(0.6).unwrap();
        assert!(line.state_at(0.6).unwrap().max_abs_diff(&w) < 1e-15);
    }

    #[test]
    fn bell_pair_interval_collapses_to_half() {
        let [_, _, psi2, psi3] = bell_basis();
        let line = FamilyLine::new(psi2.density(), psi3.density()).unwrap();
        let iv = min_separable_weight(&line, Criterion::Ppt, &opts()).unwrap();
        assert!((iv.low - 0.5).abs() < 1e-7 && (iv.high - 0.5).abs() < 1e-7, "{iv:?}");
    }

    #[test]
    fn horodecki_five_has_no_ppt_point_beyond_zero() {
        let line = FamilyLine::new(max_entangled(3).density(), sigma_plus()).unwrap();
        let iv = min_separable_weight(&line, Criterion::Ppt, &opts()).unwrap();
        assert!(iv.high < 1e-7, "{iv:?}");
        assert_eq!(interval_crossings(Some(iv)).len(), 1);
    }

    #[test]
    fn exact_above_two_by_three_is_undecided_inside_the_ppt_region() {
        let line = horodecki_line(3.0).unwrap();
        assert!(matches!(
            min_separable_weight(&line, Criterion::Exact, &opts()),
            Err(Error::OracleUndecided { .. })
        ));
    }

    #[test]
    fn pure_entangled_pair_without_separable_mixture() {
        // |ψ+⟩ and |00⟩-free rotation: (|01⟩+|10⟩)/√2 and |ψ+⟩ mix to states
        // whose PT always has a negative eigenvalue
        let [_, _, _, psi3] = bell_basis();
        let h = 0.5f64.sqrt();
        let d = BipartiteDims::new(2, 2).unwrap();
        let amp = [0.0, h, h, 0.0].iter().map(|&x| crate::C64::new(x, 0.0)).collect();
        let other = crate::PureState::new(amp, d).unwrap();
        let line = FamilyLine::new(psi3.density(), other.density()).unwrap();
        assert!(min_separable_weight(&line, Criterion::Ppt, &opts()).is_ok());
        let iv = min_separable_weight(&line, Criterion::Ppt, &opts()).unwrap();
        assert!((iv.low - 0.5).abs() < 1e-7);
    }

    #[test]
    fn ccnr_crossing_on_the_werner_line() {
        let line = FamilyLine::new(max_entangled(2).density(), max_mixed(BipartiteDims::new(2, 2).unwrap())).unwrap();
        let c = ccnr_crossings(&line, &opts());
        assert_eq!(c.len(), 1);
        assert!((c[0] - 1.0 / 3.0).abs() < 1e-6);
    }
}
