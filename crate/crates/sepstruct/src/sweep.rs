//! Parallel boundary sweeps and their CSV output.

use rayon::prelude::*;

use sepstruct_core::approximations::{sweep_point, SweepFamily, SweepRow};
use sepstruct_core::{Criterion, Options};

use crate::error::CliError;
use crate::output::format_sig;

pub const CSV_HEADER: [&str; 4] = ["param", "criterion", "crossing_index", "t_value"];
pub const SIGNIFICANT_DIGITS: usize = 10;

/// Parses `start:stop:step` into the inclusive grid `start + k·step`.
pub fn parse_range(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::BadFlag(format!("range `{spec}` is not start:stop:step"));
    let parts: Vec<f64> = spec
        .split(':')
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    let [start, stop, step] = parts[..] else {
        return Err(bad());
    };
    if !(start.is_finite() && stop.is_finite() && step.is_finite()) || step <= 0.0 || stop < start {
        return Err(bad());
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|k| start + k as f64 * step).collect())
}

pub fn parse_criteria(spec: &str) -> Result<Vec<Criterion>, CliError> {
    let mut out: Vec<Criterion> = Vec::new();
    for name in spec.split(',') {
        let c = match name.trim() {
            "ppt" => Criterion::Ppt,
            "ccnr" => Criterion::Ccnr,
            "exact" => Criterion::Exact,
            other => return Err(CliError::BadFlag(format!("unknown criterion `{other}`"))),
        };
        if !out.contains(&c) {
            out.push(c);
        }
    }
    Ok(out)
}

/// Rows for every parameter, computed in parallel and kept in parameter
/// order.
pub fn run_sweep(
    family: SweepFamily,
    params: &[f64],
    criteria: &[Criterion],
    opts: &Options,
) -> Result<Vec<SweepRow>, CliError> {
    let per_point: Vec<Result<Vec<SweepRow>, sepstruct_core::Error>> = params
        .par_iter()
        .map(|&p| sweep_point(family, p, criteria, opts))
        .collect();
    let mut rows = Vec::new();
    for (p, r) in params.iter().zip(per_point) {
        match r {
            Ok(v) => rows.extend(v),
            Err(e) => {
                return Err(CliError::BadFlag(format!(
                    "{} parameter {p}: {e}",
                    family.as_str()
                )))
            }
        }
    }
    Ok(rows)
}

pub fn rows_to_csv(rows: &[SweepRow]) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    for r in rows {
        w.write_record([
            format_sig(r.param, SIGNIFICANT_DIGITS),
            r.criterion.as_str().to_string(),
            r.crossing_index.to_string(),
            format_sig(r.t_value, SIGNIFICANT_DIGITS),
        ])
        .expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}
