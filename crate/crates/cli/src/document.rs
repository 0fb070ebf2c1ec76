use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

use crate::config::RunConfig;

pub const TOOL: &str = "nudirac";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CNum {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for CNum {
    fn from(c: Complex64) -> Self {
        CNum {
            re: c.re + 0.0,
            im: c.im + 0.0,
        }
    }
}

/// Null values carry a reason keyed by field name.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Reasons(pub BTreeMap<String, String>);

impl Reasons {
    pub fn set(&mut self, field: &str, reason: impl Into<String>) {
        self.0.insert(field.to_string(), reason.into());
    }

    pub fn real(&mut self, field: &str, v: Option<f64>, reason: &str) -> Option<f64> {
        match v {
            Some(x) if x.is_finite() => Some(x),
            Some(_) => {
                self.set(field, "value is not finite");
                None
            }
            None => {
                self.set(field, reason);
                None
            }
        }
    }

    pub fn complex(&mut self, field: &str, v: Option<Complex64>, reason: &str) -> Option<CNum> {
        match v {
            Some(c) if c.re.is_finite() && c.im.is_finite() => Some(c.into()),
            Some(_) => {
                self.set(field, "value is not finite");
                None
            }
            None => {
                self.set(field, reason);
                None
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Coupled {
    pub upper: f64,
    pub lower: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[allow(non_snake_case)]
pub struct Record {
    pub n: usize,
    pub E_engine: Option<CNum>,
    pub E_paper_formula: Option<f64>,
    pub E_oracle: Option<CNum>,
    pub oracle_estimate: Option<f64>,
    pub k: Option<CNum>,
    pub k_paper: Option<CNum>,
    /// Engine `xi_1` in the decoupled equation.
    pub residual: Option<f64>,
    /// Printed `xi_1` in the decoupled equation.
    pub paper_residual: Option<f64>,
    pub coupled_residual: Option<Coupled>,
    pub norm_converged: Option<bool>,
    pub norm_growth_exponent: Option<f64>,
    pub null_reasons: Reasons,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleSummary {
    pub pencil: String,
    pub converged_levels: usize,
    pub rejected_levels: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Wavefunction {
    pub n: usize,
    /// Rows `[x, re_psi1, im_psi1, re_psi2, im_psi2]`.
    pub samples: Vec<[f64; 5]>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResultDocument {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config: RunConfig,
    pub records: Vec<Record>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSummary>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<Check>,
    pub discrepancy_notes: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub wavefunctions: Vec<Wavefunction>,
    pub status: &'static str,
}

impl ResultDocument {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }
}

/// Seventeen significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

pub const RECORD_CSV_HEADER: &str =
    "n,E_engine_re,E_engine_im,E_paper_formula,E_oracle_re,E_oracle_im,k_re,k_im,residual,norm_converged";

pub fn records_csv(doc: &ResultDocument) -> String {
    let mut out = String::new();
    out.push_str(RECORD_CSV_HEADER);
    out.push('\n');
    for r in &doc.records {
        let c = |v: Option<CNum>| (opt(v.map(|c| c.re)), opt(v.map(|c| c.im)));
        let (er, ei) = c(r.E_engine);
        let (or, oi) = c(r.E_oracle);
        let (kr, ki) = c(r.k);
        let norm = r.norm_converged.map(|b| b.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{er},{ei},{},{or},{oi},{kr},{ki},{},{norm}",
            r.n,
            opt(r.E_paper_formula),
            opt(r.residual)
        );
    }
    out
}

pub const WAVE_CSV_HEADER: &str = "x,re_psi1,im_psi1,re_psi2,im_psi2,n";

/// One block per level, each with its own header row.
pub fn wavefunctions_csv(waves: &[Wavefunction]) -> String {
    let mut out = String::new();
    for w in waves {
        out.push_str(WAVE_CSV_HEADER);
        out.push('\n');
        for row in &w.samples {
            let cells: Vec<String> = row.iter().map(|&v| fmt_f64(v)).collect();
            let _ = writeln!(out, "{},{}", cells.join(","), w.n);
        }
    }
    out
}
