//! Report JSON:
//! `{"input":{...},"verdicts":[...],"structure":{...},"bsa":{...},"bppta":{...},"notes":[...]}`.

use serde::{Deserialize, Serialize};

use sepstruct_core::approximations::{BpptaDecomposition, BsaDecomposition, Robustness};
use sepstruct_core::separability::{ccnr_norm, ppt_min_eig, verdict, WeightedProduct};
use sepstruct_core::structure::StructureDecomposition;
use sepstruct_core::{DensityMatrix, Options, C64};

use crate::state_io::StateJson;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub input: InputDigest,
    pub verdicts: Vec<VerdictEntry>,
    pub structure: Option<StructureReport>,
    pub bsa: Option<BsaReport>,
    pub bppta: Option<BpptaReport>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub dims: [usize; 2],
    pub trace: f64,
    pub min_eigenvalue: f64,
}

/// One line per criterion; `overall` carries the three-valued verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictEntry {
    pub criterion: String,
    pub value: Option<f64>,
    pub satisfied: Option<bool>,
    pub outcome: Option<String>,
    pub certificate: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductTerm {
    pub weight: f64,
    pub left: Vec<[f64; 2]>,
    pub right: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructureReport {
    pub lambda_ps: f64,
    pub ps: Option<StateJson>,
    pub pe: Option<StateJson>,
    pub ps_certificate: Vec<ProductTerm>,
    pub pe_verdict: Option<String>,
    pub pe_note: String,
    pub certified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobustnessReport {
    /// `finite` or `infinite_above`; `value` is the robustness or the cap.
    pub kind: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BsaReport {
    pub criterion: String,
    pub mode: Option<String>,
    pub lambda_s: Option<f64>,
    pub bsa: Option<StateJson>,
    pub remainder: Option<StateJson>,
    pub robustness: Option<RobustnessReport>,
    /// Criterion-relative decompositions bracketing an undecided exact one.
    pub bracket: Vec<BsaReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BpptaReport {
    pub lambda_b: f64,
    pub bppta: Option<StateJson>,
    pub remainder: Option<StateJson>,
    pub boundary_t: Option<f64>,
}

fn pairs(v: &[C64]) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

impl AnalysisReport {
    /// Input digest and per-criterion verdicts.
    pub fn analyze(rho: &DensityMatrix, opts: &Options) -> Self {
        let dims = rho.dims();
        let ppt = ppt_min_eig(rho);
        let ccnr = ccnr_norm(rho);
        let v = verdict(rho, opts);
        let mut notes = Vec::new();
        if ppt >= -opts.psd_tol && v.is_entangled() {
            notes.push(String::from("PPT entangled: bound entanglement detected by CCNR"));
        }
        AnalysisReport {
            input: InputDigest {
                dims: [dims.d_a(), dims.d_b()],
                trace: rho.trace(),
                min_eigenvalue: rho.min_eigenvalue(),
            },
            verdicts: vec![
                VerdictEntry {
                    criterion: String::from("ppt"),
                    value: Some(ppt),
                    satisfied: Some(ppt >= -opts.psd_tol),
                    outcome: None,
                    certificate: None,
                },
                VerdictEntry {
                    criterion: String::from("ccnr"),
                    value: Some(ccnr),
                    satisfied: Some(ccnr <= 1.0 + opts.psd_tol),
                    outcome: None,
                    certificate: None,
                },
                VerdictEntry {
                    criterion: String::from("overall"),
                    value: None,
                    satisfied: None,
                    outcome: Some(v.outcome.as_str().to_string()),
                    certificate: Some(v.certificate.as_str().to_string()),
                },
            ],
            structure: None,
            bsa: None,
            bppta: None,
            notes,
        }
    }

    pub fn overall_label(&self) -> Option<String> {
        self.verdicts
            .iter()
            .find(|v| v.criterion == "overall")
            .and_then(|v| Some(format!("{}({})", v.outcome.as_ref()?, v.certificate.as_ref()?)))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

impl StructureReport {
    pub fn from_decomposition(s: &StructureDecomposition) -> Self {
        StructureReport {
            lambda_ps: s.lambda_ps,
            ps: s.ps.as_ref().map(StateJson::from_state),
            pe: s.pe.as_ref().map(StateJson::from_state),
            ps_certificate: s.ps_certificate.iter().map(product_term).collect(),
            pe_verdict: s.pe_verdict.as_ref().map(|v| v.label()),
            pe_note: s.pe_note.clone(),
            certified: s.certified,
        }
    }
}

fn product_term(p: &WeightedProduct) -> ProductTerm {
    ProductTerm {
        weight: p.weight,
        left: pairs(&p.left),
        right: pairs(&p.right),
    }
}

impl RobustnessReport {
    pub fn from_robustness(r: Robustness) -> Self {
        match r {
            Robustness::Finite(t) => RobustnessReport {
                kind: String::from("finite"),
                value: t,
            },
            Robustness::InfiniteAbove(cap) => RobustnessReport {
                kind: String::from("infinite_above"),
                value: cap,
            },
        }
    }
}

impl BsaReport {
    pub fn from_decomposition(criterion: &str, d: &BsaDecomposition) -> Self {
        BsaReport {
            criterion: criterion.to_string(),
            mode: Some(d.mode.as_str().to_string()),
            lambda_s: Some(d.lambda_s),
            bsa: d.bsa.as_ref().map(StateJson::from_state),
            remainder: d.remainder.as_ref().map(StateJson::from_state),
            robustness: d.robustness.map(RobustnessReport::from_robustness),
            bracket: Vec::new(),
        }
    }

    /// Undecided exact BSA with its criterion-relative bracket.
    pub fn undecided(criterion: &str, bracket: &[BsaDecomposition]) -> Self {
        BsaReport {
            criterion: criterion.to_string(),
            mode: None,
            lambda_s: None,
            bsa: None,
            remainder: None,
            robustness: None,
            bracket: bracket
                .iter()
                .map(|d| {
                    let c = match d.mode {
                        sepstruct_core::approximations::BsaMode::CriterionRelative(c) => c.as_str(),
                        _ => "exact",
                    };
                    BsaReport::from_decomposition(c, d)
                })
                .collect(),
        }
    }
}

impl BpptaReport {
    pub fn from_decomposition(d: &BpptaDecomposition) -> Self {
        BpptaReport {
            lambda_b: d.lambda_b,
            bppta: d.bppta.as_ref().map(StateJson::from_state),
            remainder: d.remainder.as_ref().map(StateJson::from_state),
            boundary_t: d.boundary_t,
        }
    }
}
