//! Command-line front end.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use sepstruct_core::approximations::{bppta, bsa, bsa_bracket, bsa_relative, SweepFamily};
use sepstruct_core::structure::purely_decompose;
use sepstruct_core::{Criterion, DensityMatrix, Error as CoreError, Options};

use crate::error::{exit, CliError};
use crate::output::{format_sig, write_atomic};
use crate::report::{AnalysisReport, BpptaReport, BsaReport, StructureReport};
use crate::reproduce::{run_case, Case, CaseReport, Status};
use crate::state_io::{load_state, save_state};
use crate::sweep::{parse_criteria, parse_range, rows_to_csv, run_sweep};

#[derive(Debug, Parser)]
#[command(name = "sepstruct", version, about = "Structure, BSA and BPPTA of bipartite quantum states")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Positive-semidefiniteness and validation tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Width at which boundary bisection stops.
    #[arg(long = "bisect-tol", global = true, default_value_t = 1e-7)]
    pub bisect_tol: f64,
    /// Grid points for CCNR boundary scans.
    #[arg(long, global = true, default_value_t = 512)]
    pub grid: usize,
    /// Robustness cap.
    #[arg(long, global = true, default_value_t = 1e6)]
    pub tmax: f64,
    /// Output file (report JSON, sweep CSV or reproduction JSON).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Print JSON on stdout instead of a summary.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Verdicts of every criterion.
    Analyze { path: PathBuf },
    /// Purely separable and purely entangled parts.
    Decompose {
        path: PathBuf,
        /// Directory for ps.json and pe.json.
        #[arg(long = "emit-parts")]
        emit_parts: Option<PathBuf>,
    },
    /// Best separable approximation.
    Bsa {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = CriterionArg::Exact)]
        criterion: CriterionArg,
    },
    /// Best PPT approximation.
    Bppta { path: PathBuf },
    /// Boundary crossings along a state family.
    Sweep {
        #[arg(long, value_enum)]
        family: FamilyArg,
        /// Parameter grid `start:stop:step`.
        #[arg(long)]
        alpha: Option<String>,
        /// Comma-separated criteria.
        #[arg(long, default_value = "ppt,ccnr")]
        criteria: String,
    },
    /// Regression checks against the published values.
    Reproduce {
        #[arg(value_enum)]
        case: Option<Case>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CriterionArg {
    Ppt,
    Ccnr,
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Horodecki,
    Werner,
    Varrho,
}

impl FamilyArg {
    fn family(self) -> SweepFamily {
        match self {
            FamilyArg::Horodecki => SweepFamily::Horodecki,
            FamilyArg::Werner => SweepFamily::Werner,
            FamilyArg::Varrho => SweepFamily::Varrho,
        }
    }

    fn default_range(self) -> &'static str {
        match self {
            FamilyArg::Horodecki => "0:5:0.05",
            FamilyArg::Werner => "0:1:0.1",
            FamilyArg::Varrho => "0.05:1:0.05",
        }
    }
}

/// What a command produced: stdout text, an optional file and an exit code.
#[derive(Debug, Default)]
pub struct Output {
    pub stdout: String,
    pub file: Option<Vec<u8>>,
    pub code: i32,
}

impl GlobalArgs {
    pub fn options(&self) -> Result<Options, CliError> {
        let positive = |name: &str, x: f64| {
            if x.is_finite() && x > 0.0 {
                Ok(x)
            } else {
                Err(CliError::BadFlag(format!("--{name} must be a positive number, got {x}")))
            }
        };
        if self.grid < 2 {
            return Err(CliError::BadFlag(format!("--grid must be at least 2, got {}", self.grid)));
        }
        Ok(Options {
            psd_tol: positive("tol", self.tol)?,
            bisect_tol: positive("bisect-tol", self.bisect_tol)?,
            grid: self.grid,
            t_max: positive("tmax", self.tmax)?,
        })
    }
}

pub fn execute(cli: &Cli) -> Result<Output, CliError> {
    let opts = cli.global.options()?;
    let json = cli.global.json;
    let out = match &cli.command {
        Command::Analyze { path } => {
            let rho = load_state(path, opts.psd_tol)?;
            report_output(AnalysisReport::analyze(&rho, &opts), json, exit::OK)
        }
        Command::Decompose { path, emit_parts } => {
            let rho = load_state(path, opts.psd_tol)?;
            decompose(&rho, emit_parts.as_deref(), &opts, json)?
        }
        Command::Bsa { path, criterion } => {
            let rho = load_state(path, opts.psd_tol)?;
            bsa_command(&rho, *criterion, &opts, json)?
        }
        Command::Bppta { path } => {
            let rho = load_state(path, opts.psd_tol)?;
            let mut report = AnalysisReport::analyze(&rho, &opts);
            report.bppta = Some(BpptaReport::from_decomposition(&bppta(&rho, &opts)?));
            report_output(report, json, exit::OK)
        }
        Command::Sweep {
            family,
            alpha,
            criteria,
        } => {
            let params = parse_range(alpha.as_deref().unwrap_or(family.default_range()))?;
            let criteria = parse_criteria(criteria)?;
            let rows = run_sweep(family.family(), &params, &criteria, &opts)?;
            let csv = rows_to_csv(&rows);
            let stdout = if cli.global.out.is_some() {
                format!("{} rows\n", rows.len())
            } else {
                String::from_utf8(csv.clone()).expect("csv is utf-8")
            };
            Output {
                stdout,
                file: Some(csv),
                code: exit::OK,
            }
        }
        Command::Reproduce { case } => {
            let cases: Vec<Case> = case.map_or_else(|| Case::ALL.to_vec(), |c| vec![c]);
            let reports: Vec<CaseReport> = cases.into_iter().map(|c| run_case(c, &opts)).collect();
            reproduce_output(&reports, json)
        }
    };
    Ok(out)
}

fn report_output(report: AnalysisReport, json: bool, code: i32) -> Output {
    let text = report.to_json();
    Output {
        stdout: if json { text.clone() } else { summary(&report) },
        file: Some(text.into_bytes()),
        code,
    }
}

fn decompose(rho: &DensityMatrix, emit_parts: Option<&Path>, opts: &Options, json: bool) -> Result<Output, CliError> {
    let s = purely_decompose(rho, opts);
    if let Some(dir) = emit_parts {
        std::fs::create_dir_all(dir).map_err(|source| CliError::Write {
            path: dir.to_path_buf(),
            source,
        })?;
        if let Some(ps) = &s.ps {
            save_state(&dir.join("ps.json"), ps)?;
        }
        if let Some(pe) = &s.pe {
            save_state(&dir.join("pe.json"), pe)?;
        }
    }
    let mut report = AnalysisReport::analyze(rho, opts);
    report.notes.extend(s.notes.iter().cloned());
    report.structure = Some(StructureReport::from_decomposition(&s));
    let code = if s.certified { exit::OK } else { exit::UNDECIDED };
    Ok(report_output(report, json, code))
}

fn bsa_command(rho: &DensityMatrix, criterion: CriterionArg, opts: &Options, json: bool) -> Result<Output, CliError> {
    let mut report = AnalysisReport::analyze(rho, opts);
    let result = match criterion {
        CriterionArg::Ppt => bsa_relative(rho, Criterion::Ppt, opts),
        CriterionArg::Ccnr => bsa_relative(rho, Criterion::Ccnr, opts),
        CriterionArg::Exact => bsa(rho, opts),
    };
    let name = match criterion {
        CriterionArg::Ppt => "ppt",
        CriterionArg::Ccnr => "ccnr",
        CriterionArg::Exact => "exact",
    };
    let code = match result {
        Ok(d) => {
            report.bsa = Some(BsaReport::from_decomposition(name, &d));
            exit::OK
        }
        Err(CoreError::OracleUndecided { context }) => {
            report.bsa = Some(BsaReport::undecided(name, &bsa_bracket(rho, opts)));
            report.notes.push(format!("undecided: {context}; criterion-relative bracket reported"));
            exit::UNDECIDED
        }
        Err(e) => return Err(e.into()),
    };
    Ok(report_output(report, json, code))
}

fn reproduce_output(reports: &[CaseReport], json: bool) -> Output {
    let text = {
        let mut s = serde_json::to_string_pretty(reports).expect("reports serialize");
        s.push('\n');
        s
    };
    let mut stdout = String::new();
    if json {
        stdout.push_str(&text);
    } else {
        for r in reports {
            let _ = writeln!(stdout, "== {}", r.case.as_str());
            for c in &r.checks {
                let _ = writeln!(stdout, "{}", c.line());
            }
        }
        let count = |s: Status| reports.iter().flat_map(|r| &r.checks).filter(|c| c.status == s).count();
        let _ = writeln!(
            stdout,
            "{} passed, {} failed, {} flagged",
            count(Status::Pass),
            count(Status::Fail),
            count(Status::Flagged)
        );
    }
    let code = if reports.iter().all(CaseReport::passed) {
        exit::OK
    } else {
        exit::MISMATCH
    };
    Output {
        stdout,
        file: Some(text.into_bytes()),
        code,
    }
}

fn num(x: f64) -> String {
    format_sig(x, 10)
}

fn summary(r: &AnalysisReport) -> String {
    let mut s = String::new();
    let [da, db] = r.input.dims;
    let _ = writeln!(
        s,
        "input      {da}x{db}, trace {}, min eigenvalue {}",
        num(r.input.trace),
        num(r.input.min_eigenvalue)
    );
    for v in &r.verdicts {
        match (v.value, v.satisfied) {
            (Some(x), Some(ok)) => {
                let _ = writeln!(s, "{:<10} {:<18} {}", v.criterion, num(x), if ok { "satisfied" } else { "violated" });
            }
            _ => {
                if let Some(label) = r.overall_label() {
                    let _ = writeln!(s, "verdict    {label}");
                }
            }
        }
    }
    if let Some(st) = &r.structure {
        let _ = writeln!(s, "structure  lambda_ps {}, certified {}", num(st.lambda_ps), st.certified);
        let _ = writeln!(s, "           ps certificate terms {}", st.ps_certificate.len());
        if let Some(v) = &st.pe_verdict {
            let _ = writeln!(s, "           pe verdict {v}");
        }
        let _ = writeln!(s, "           {}", st.pe_note);
    }
    if let Some(b) = &r.bsa {
        match b.lambda_s {
            Some(l) => {
                let _ = write!(s, "bsa        {} lambda_s {}", b.criterion, num(l));
                if let Some(m) = &b.mode {
                    let _ = write!(s, ", mode {m}");
                }
                if let Some(rb) = &b.robustness {
                    let _ = write!(s, ", robustness {} {}", rb.kind, num(rb.value));
                }
                s.push('\n');
            }
            None => {
                let _ = writeln!(s, "bsa        {} undecided", b.criterion);
                for br in &b.bracket {
                    let _ = writeln!(s, "           {} lambda_s {}", br.criterion, br.lambda_s.map_or(String::from("-"), num));
                }
            }
        }
    }
    if let Some(b) = &r.bppta {
        let _ = write!(s, "bppta      lambda_b {}", num(b.lambda_b));
        if let Some(t) = b.boundary_t {
            let _ = write!(s, ", boundary t {}", num(t));
        }
        s.push('\n');
    }
    for n in &r.notes {
        let _ = writeln!(s, "note       {n}");
    }
    s
}

/// Parses `args`, runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { exit::PARSE } else { exit::OK };
        }
    };
    match execute(&cli) {
        Ok(output) => {
            if let (Some(path), Some(bytes)) = (&cli.global.out, &output.file) {
                if let Err(e) = write_atomic(path, bytes) {
                    eprintln!("error: {e}");
                    return e.exit_code();
                }
            }
            print!("{}", output.stdout);
            output.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
