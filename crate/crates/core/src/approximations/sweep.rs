//! Boundary sweeps over one-parameter state families.

use alloc::vec::Vec;

use crate::error::Result;
use crate::options::{Criterion, Options};
use crate::separability::{ccnr_crossings, criterion_interval, interval_crossings};
use crate::states::{horodecki_line, max_entangled, max_mixed, varrho_line, BipartiteDims, FamilyLine};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepFamily {
    /// `t|Ψ+⟩⟨Ψ+| + (1-t)Ω_α`, parameter `α ∈ [0, 5]`.
    Horodecki,
    /// `p|ψ+⟩⟨ψ+| + (1-p)I/4`; the parameter does not move the line.
    Werner,
    /// `t|Ψ+⟩⟨Ψ+| + (1-t)Q₊^a`, parameter `a ∈ (0, 1]`.
    Varrho,
}

impl SweepFamily {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepFamily::Horodecki => "horodecki",
            SweepFamily::Werner => "werner",
            SweepFamily::Varrho => "varrho",
        }
    }
}

/// One boundary crossing of a family at one parameter value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub param: f64,
    pub criterion: Criterion,
    pub crossing_index: usize,
    pub t_value: f64,
}

pub fn family_line(family: SweepFamily, param: f64) -> Result<FamilyLine> {
    match family {
        SweepFamily::Horodecki => horodecki_line(param),
        SweepFamily::Varrho => varrho_line(param),
        SweepFamily::Werner => {
            let dims = BipartiteDims::new(2, 2)?;
            FamilyLine::new(max_entangled(2).density(), max_mixed(dims))
        }
    }
}

/// Crossings of every criterion along the family line at `param`, in
/// criterion order then increasing `t`. PPT crossings are the ends of the
/// PPT interval inside `(0, 1)`; CCNR crossings come from the grid scan.
/// `Exact` is reported only where PPT is decisive.
pub fn sweep_point(
    family: SweepFamily,
    param: f64,
    criteria: &[Criterion],
    opts: &Options,
) -> Result<Vec<SweepRow>> {
    let line = family_line(family, param)?;
    let mut rows = Vec::new();
    for &criterion in criteria {
        let crossings = match criterion {
            Criterion::Ppt => interval_crossings(criterion_interval(
                &line,
                Criterion::Ppt,
                opts.psd_tol,
                opts.bisect_tol,
            )),
            Criterion::Ccnr => ccnr_crossings(&line, opts),
            Criterion::Exact if line.dims().ppt_is_exact() => interval_crossings(criterion_interval(
                &line,
                Criterion::Ppt,
                opts.psd_tol,
                opts.bisect_tol,
            )),
            Criterion::Exact => Vec::new(),
        };
        rows.extend(crossings.into_iter().enumerate().map(|(i, t)| SweepRow {
            param,
            criterion,
            crossing_index: i,
            t_value: t,
        }));
    }
    Ok(rows)
}

/// [`sweep_point`] over every parameter, rows in parameter order.
pub fn boundary_sweep(
    family: SweepFamily,
    params: &[f64],
    criteria: &[Criterion],
    opts: &Options,
) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    for &p in params {
        rows.extend(sweep_point(family, p, criteria, opts)?);
    }
    Ok(rows)
}
