//! Regression harness over the published values.
//!
//! Each check compares a computed value with a reference within a
//! tolerance. Known inconsistencies in the published values are reported as
//! `flagged` next to the value the oracle gives, and never count as failures.

use serde::{Deserialize, Serialize};

use sepstruct_core::approximations::{
    bppta, bsa, bsa_relative, pure_plus_noise_bsa, random_robustness_pure, robustness_with,
    Robustness,
};
use sepstruct_core::linalg::fidelity;
use sepstruct_core::separability::{
    ccnr_crossings, ccnr_norm, min_separable_weight, product_basis_certificate,
};
use sepstruct_core::states::{
    horodecki_family, horodecki_line, max_entangled, max_mixed, q_plus, rho_m, varrho,
    werner,
};
use sepstruct_core::structure::purely_decompose;
use sepstruct_core::{
    BipartiteDims, ComplexMatrix, Criterion, DensityMatrix, FamilyLine, Options, PureState, C64,
};

use crate::output::format_sig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Case {
    Werner,
    Horodecki,
    RhoM,
    VarrhoA,
    Corollary4,
}

impl Case {
    pub const ALL: [Case; 5] = [
        Case::Werner,
        Case::Horodecki,
        Case::RhoM,
        Case::VarrhoA,
        Case::Corollary4,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Case::Werner => "werner",
            Case::Horodecki => "horodecki",
            Case::RhoM => "rho-m",
            Case::VarrhoA => "varrho-a",
            Case::Corollary4 => "corollary4",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Flagged,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Flagged => "FLAGGED",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub expected: f64,
    pub computed: f64,
    pub tol: f64,
    pub status: Status,
    pub note: Option<String>,
}

impl Check {
    fn compare(name: impl Into<String>, expected: f64, computed: f64, tol: f64) -> Self {
        let status = if (expected - computed).abs() <= tol {
            Status::Pass
        } else {
            Status::Fail
        };
        Check {
            name: name.into(),
            expected,
            computed,
            tol,
            status,
            note: None,
        }
    }

    /// A published value known to disagree with the oracle.
    fn flagged(name: impl Into<String>, published: f64, oracle: f64, tol: f64, note: &str) -> Self {
        Check {
            name: name.into(),
            expected: published,
            computed: oracle,
            tol,
            status: Status::Flagged,
            note: Some(note.to_string()),
        }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn line(&self) -> String {
        let mut s = format!(
            "{:<8} {:<44} expected {:<16} computed {:<16} tol {:e}",
            self.status.as_str(),
            self.name,
            format_sig(self.expected, 10),
            format_sig(self.computed, 10),
            self.tol
        );
        if let Some(n) = &self.note {
            s.push_str("  # ");
            s.push_str(n);
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseReport {
    pub case: Case,
    pub checks: Vec<Check>,
}

impl CaseReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }
}

pub fn run_case(case: Case, opts: &Options) -> CaseReport {
    let checks = match case {
        Case::Werner => werner_checks(opts),
        Case::Horodecki => horodecki_checks(opts),
        Case::RhoM => rho_m_checks(opts),
        Case::VarrhoA => varrho_checks(opts),
        Case::Corollary4 => corollary4_checks(opts),
    };
    CaseReport { case, checks }
}

fn d22() -> BipartiteDims {
    BipartiteDims::new(2, 2).expect("valid dims")
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// A failed computation shows up as a failing check instead of a panic.
fn computed_or_nan<T>(r: sepstruct_core::Result<T>, f: impl FnOnce(T) -> f64) -> f64 {
    r.map(f).unwrap_or(f64::NAN)
}

fn distance(a: Option<&DensityMatrix>, b: &DensityMatrix) -> f64 {
    a.map_or(f64::INFINITY, |a| a.max_abs_diff(b))
}

fn werner_checks(opts: &Options) -> Vec<Check> {
    let mut out = Vec::new();
    let line = FamilyLine::new(max_entangled(2).density(), max_mixed(d22())).expect("same dims");
    let high = computed_or_nan(min_separable_weight(&line, Criterion::Ppt, opts), |iv| iv.high);
    out.push(Check::compare("threshold p", 1.0 / 3.0, high, 1e-6));
    let third = werner(1.0 / 3.0).expect("valid p");
    for p in [0.4, 0.5, 0.8] {
        let d = bsa(&werner(p).expect("valid p"), opts);
        let (lambda, dist) = match &d {
            Ok(d) => (d.lambda_s, distance(d.bsa.as_ref(), &third)),
            Err(_) => (f64::NAN, f64::NAN),
        };
        out.push(Check::compare(format!("bsa p={p} lambda_s"), (3.0 * p - 1.0) / 2.0, lambda, 1e-6));
        out.push(Check::compare(format!("bsa p={p} |bsa - werner(1/3)|"), 0.0, dist, 1e-6));
    }
    let psi = max_entangled(2).density();
    let noise = max_mixed(d22());
    for p in [0.1, 0.5, 0.9] {
        let s = purely_decompose(&werner(p).expect("valid p"), opts);
        out.push(Check::compare(format!("structure p={p} lambda"), 1.0 - p, s.lambda_ps, 1e-8));
        out.push(Check::compare(format!("structure p={p} |ps - I/4|"), 0.0, distance(s.ps.as_ref(), &noise), 1e-8));
        out.push(Check::compare(format!("structure p={p} |pe - psi+|"), 0.0, distance(s.pe.as_ref(), &psi), 1e-8));
    }
    out
}

fn ppt_closed_form(a: f64) -> f64 {
    (a * a - 5.0 * a + 5.0 * (a * (5.0 - a)).sqrt()) / (a * a - 5.0 * a + 25.0)
}

/// Both roots of the printed CCNR boundary formula.
pub fn ccnr_closed_form(a: f64) -> [f64; 2] {
    let root = (4.0 * a * a - 20.0 * a + 25.0).sqrt();
    let den = 2.0 * (a * a - 5.0 * a - 50.0);
    let num = 2.0 * a * a - 10.0 * a - 25.0;
    [(num + 5.0 * root) / den, (num - 5.0 * root) / den]
}

fn nearest(values: &[f64], target: f64) -> f64 {
    values
        .iter()
        .copied()
        .min_by(|x, y| (x - target).abs().total_cmp(&(y - target).abs()))
        .unwrap_or(f64::NAN)
}

fn horodecki_checks(opts: &Options) -> Vec<Check> {
    let mut out = Vec::new();
    for a in [1.0, 2.0, 2.5, 3.0, 4.0, 5.0] {
        let line = horodecki_line(a).expect("valid alpha");
        let high = computed_or_nan(min_separable_weight(&line, Criterion::Ppt, opts), |iv| iv.high);
        out.push(Check::compare(format!("ppt boundary alpha={a}"), ppt_closed_form(a), high, 1e-6));
    }
    for a in [2.5, 3.0, 3.5, 4.0] {
        let crossings = ccnr_crossings(&horodecki_line(a).expect("valid alpha"), opts);
        for (k, root) in ccnr_closed_form(a).into_iter().enumerate() {
            let found = nearest(&crossings, root);
            let name = format!("ccnr boundary t0_{} alpha={a}", k + 1);
            let mut check = Check::compare(name.clone(), root, found, 1e-5);
            if check.status == Status::Fail {
                // a root off the boundary is a known inconsistency only when
                // the realigned norm there is demonstrably not 1
                let norm = ccnr_norm(&horodecki_family(a, root).expect("valid t"));
                let note = format!(
                    "realigned trace norm at t = {} is {}, not 1",
                    format_sig(root, 10),
                    format_sig(norm, 10)
                );
                check = if (norm - 1.0).abs() > 1e-3 {
                    Check::flagged(name, root, found, 1e-5, &note)
                } else {
                    check.with_note(note)
                };
            }
            out.push(check);
        }
    }

    // alpha = 2.5: every boundary sits at 1/3
    let rho = horodecki_family(2.5, 0.9).expect("valid t");
    let target = horodecki_family(2.5, 1.0 / 3.0).expect("valid t");
    let ccnr = ccnr_crossings(&horodecki_line(2.5).expect("valid alpha"), opts);
    out.push(Check::compare("alpha=2.5 ccnr boundary", 1.0 / 3.0, nearest(&ccnr, 1.0 / 3.0), 1e-6));
    for c in [Criterion::Ppt, Criterion::Ccnr] {
        let d = computed_or_nan(bsa_relative(&rho, c, opts), |d| distance(d.bsa.as_ref(), &target));
        out.push(Check::compare(format!("alpha=2.5 {}-relative bsa |. - sigma^(1/3)|", c.as_str()), 0.0, d, 1e-6));
    }
    let d = computed_or_nan(bppta(&rho, opts), |d| distance(d.bppta.as_ref(), &target));
    out.push(Check::compare("alpha=2.5 bppta |. - sigma^(1/3)|", 0.0, d, 1e-6));

    // alpha = 3
    let rho = horodecki_family(3.0, 0.5).expect("valid t");
    let bsa_target = horodecki_family(3.0, 2.0 / 7.0).expect("valid t");
    let d = computed_or_nan(bsa_relative(&rho, Criterion::Ccnr, opts), |d| {
        distance(d.bsa.as_ref(), &bsa_target)
    });
    out.push(Check::compare("alpha=3 ccnr-relative bsa |. - sigma^(2/7)|", 0.0, d, 1e-6));
    let oracle = (-6.0 + 5.0 * 6f64.sqrt()) / 19.0;
    let bppta_target = horodecki_family(3.0, oracle).expect("valid t");
    let result = bppta(&rho, opts);
    let d = match &result {
        Ok(b) => distance(b.bppta.as_ref(), &bppta_target),
        Err(_) => f64::NAN,
    };
    out.push(Check::compare("alpha=3 bppta |. - sigma^((-6+5sqrt6)/19)|", 0.0, d, 1e-6));
    let high = computed_or_nan(
        min_separable_weight(&horodecki_line(3.0).expect("valid alpha"), Criterion::Ppt, opts),
        |iv| iv.high,
    );
    out.push(Check::flagged(
        "alpha=3 bppta weight",
        3.0 / 8.0,
        high,
        1e-6,
        "published 3/8 is not on the PPT boundary",
    ));
    out
}

fn rho_m_checks(opts: &Options) -> Vec<Check> {
    let s = purely_decompose(&rho_m(), opts);
    let r6 = 1.0 / 6f64.sqrt();
    let h = 0.5f64.sqrt();
    let phi = [real(r6), real(0.0), real(r6), real(2.0 * r6)];
    let phi_prime = [real(-h), real(0.0), real(h), real(0.0)];
    let top = |m: Option<&DensityMatrix>, v: &[C64]| {
        m.map_or(0.0, |m| fidelity(&m.eig().vectors[0], v))
    };
    vec![
        Check::compare("entangled weight", 0.75, 1.0 - s.lambda_ps, 1e-6),
        Check::compare("separable weight", 0.25, s.lambda_ps, 1e-6),
        Check::compare("fidelity pe with phi", 1.0, top(s.pe.as_ref(), &phi), 1e-8),
        Check::compare("fidelity ps with phi'", 1.0, top(s.ps.as_ref(), &phi_prime), 1e-8),
    ]
}

/// The published 9×9 matrix of `ϱ_a`.
pub fn varrho_printed(a: f64) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(9, 9);
    for (i, j) in [(0, 0), (0, 4), (0, 8), (4, 0), (4, 4), (4, 8), (8, 0), (8, 4)] {
        m[(i, j)] = real(a);
    }
    for i in [1, 2, 3, 5, 7] {
        m[(i, i)] = real(a);
    }
    let off = (1.0 - a * a).sqrt() / 2.0;
    m[(6, 6)] = real((1.0 + a) / 2.0);
    m[(8, 8)] = real((1.0 + a) / 2.0);
    m[(6, 8)] = real(off);
    m[(8, 6)] = real(off);
    m.scale(1.0 / (8.0 * a + 1.0))
}

/// `ϱ_a` assembled from the construction as written in the text, with
/// `|Φ_a⟩ = |0⟩(…)` and `Q = I − (Σ|ii⟩⟨ii| + |02⟩⟨02|)`.
fn varrho_as_written(a: f64) -> ComplexMatrix {
    let n = 9;
    let mut q = ComplexMatrix::identity(n);
    for idx in [0, 4, 8, 2] {
        q[(idx, idx)] = real(0.0);
    }
    let local = [real(((1.0 + a) / 2.0).sqrt()), real(0.0), real(((1.0 - a) / 2.0).sqrt())];
    let phi = PureState::product(&[real(1.0), real(0.0), real(0.0)], &local).expect("unit vectors");
    let insep = max_entangled(3)
        .projector()
        .scale(3.0 / 8.0)
        .lin_comb(1.0, &q, 1.0 / 8.0);
    let unnormalized = insep.scale(8.0 * a).lin_comb(1.0, &phi.projector(), 1.0);
    unnormalized.scale(1.0 / (8.0 * a + 1.0))
}

fn varrho_checks(opts: &Options) -> Vec<Check> {
    let mut out = Vec::new();
    for a in [0.25, 0.5, 1.0] {
        let printed = varrho_printed(a);
        let built = varrho(a).expect("valid a");
        out.push(Check::compare(
            format!("a={a} |(3a/(8a+1))P + ((5a+1)/(8a+1))Q+ - printed|"),
            0.0,
            built.matrix().max_abs_diff(&printed),
            1e-12,
        ));
        let q = q_plus(a).expect("valid a");
        let certified = product_basis_certificate(&q).map_or(0.0, |c| c.len() as f64);
        out.push(Check::compare(format!("a={a} Q+ product-basis terms"), 6.0, certified, 0.0));
        let s = purely_decompose(&built, opts);
        out.push(Check::compare(
            format!("a={a} separable weight"),
            (5.0 * a + 1.0) / (8.0 * a + 1.0),
            s.lambda_ps,
            1e-8,
        ));
        out.push(Check::compare(format!("a={a} |ps - Q+|"), 0.0, distance(s.ps.as_ref(), &q), 1e-8));
        let psi = max_entangled(3).density();
        out.push(Check::compare(format!("a={a} |pe - Psi+|"), 0.0, distance(s.pe.as_ref(), &psi), 1e-8));
    }
    let gap = varrho_as_written(0.5).max_abs_diff(&varrho_printed(0.5));
    out.push(Check::flagged(
        "a=0.5 |construction as written - printed|",
        0.0,
        gap,
        1e-12,
        "the printed matrix needs |Phi_a> = |2>(...) and no |20> in Q",
    ));
    out
}

fn corollary4_checks(opts: &Options) -> Vec<Check> {
    let mut out = Vec::new();
    let (c, s) = (0.3f64.cos(), 0.3f64.sin());
    let d23 = BipartiteDims::new(2, 3).expect("valid dims");
    let k = 1.0 / 3f64.sqrt();
    let states: Vec<(&str, PureState)> = vec![
        ("psi+ 2x2", max_entangled(2)),
        ("cos/sin 2x2", PureState::new(vec![real(c), real(0.0), real(0.0), real(s)], d22()).expect("unit")),
        ("psi 2x3", PureState::new(vec![real(k), real(0.0), real(0.0), real(0.0), real(k), real(k)], d23).expect("unit")),
        ("psi+ 3x3", max_entangled(3)),
    ];
    for (name, psi) in states {
        let dims = psi.dims();
        let r = random_robustness_pure(&psi).unwrap_or(f64::NAN);
        let numeric = match robustness_with(&psi.density(), &max_mixed(dims), Criterion::Ppt, opts) {
            Ok(Robustness::Finite(t)) => t,
            _ => f64::NAN,
        };
        let mut check = Check::compare(format!("{name} robustness vs r1 r2 dA dB"), r, numeric, 1e-5);
        if !dims.ppt_is_exact() {
            check = check.with_note("PPT-relative");
        }
        out.push(check);
        match pure_plus_noise_bsa(&psi, 0.9, opts) {
            Ok(n) => {
                out.push(Check::compare(format!("{name} bsa weight 1/(1+R)"), n.w_formula, n.w_star, 1e-6));
                out.push(Check::flagged(
                    format!("{name} printed lambda_s"),
                    n.w_complement,
                    n.w_star,
                    1e-6,
                    "printed value is the weight of the noise, R/(1+R)",
                ));
            }
            Err(_) => out.push(Check::compare(format!("{name} bsa weight 1/(1+R)"), 1.0 / (1.0 + r), f64::NAN, 1e-6)),
        }
    }
    out
}
