//! JSON reports. Field order is fixed by the struct definitions, so equal
//! inputs give byte-identical output. Non-finite numbers are written as `null`.

use serde::Serialize;

use maxsurf_core::extension::{CaseParameters, ContactData, MatchingReport};
use maxsurf_core::verify::{CheckRecord, DiagnosticsReport};

pub const SCHEMA: &str = "maxsurf-report/1";

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: &'static str,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sheet: Option<&'static str>,
    pub checks: Vec<Check>,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contact: Option<Contact>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matching: Option<Matching>,
    /// Where the extended config was written.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    /// The extended config itself, when no output path was given.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extended_config: Option<String>,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Report {
            schema: SCHEMA,
            command,
            passed: false,
            error: None,
            sheet: None,
            checks: Vec::new(),
            warnings: Vec::new(),
            contact: None,
            matching: None,
            output: None,
            extended_config: None,
        }
    }

    pub fn from_diagnostics(command: &'static str, d: &DiagnosticsReport) -> Self {
        let mut r = Report::new(command);
        r.passed = d.passed();
        r.sheet = d.sheet.map(|s| s.name());
        r.checks = d.checks.iter().map(Check::from).collect();
        r.warnings = d.warnings.clone();
        r
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub bound: &'static str,
    pub value: f64,
    pub tolerance: f64,
    pub samples: usize,
    pub note: String,
}

impl From<&CheckRecord> for Check {
    fn from(c: &CheckRecord) -> Self {
        Check {
            name: c.name.clone(),
            passed: c.passed,
            bound: c.bound.name(),
            value: c.value,
            tolerance: c.tolerance,
            samples: c.samples,
            note: c.note.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Contact {
    pub plane_class: &'static str,
    pub normal: [f64; 3],
    pub offset: f64,
    pub c: f64,
    pub deviation: f64,
    pub case: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    pub fitted_locus: String,
    pub fit_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_locus: Option<String>,
    pub locus_discrepancy: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coth_radius: Option<f64>,
    pub sheet: &'static str,
    pub containment_residual: f64,
    pub containment_tol: f64,
}

impl From<&ContactData> for Contact {
    fn from(c: &ContactData) -> Self {
        let (case, theta, lambda) = match c.params {
            CaseParameters::Spacelike { theta } => ("spacelike", Some(theta), None),
            CaseParameters::Timelike { lambda } => ("timelike", None, Some(lambda)),
            CaseParameters::Lightlike { lambda } => ("lightlike", None, Some(lambda)),
            CaseParameters::Conelike => ("conelike", None, None),
        };
        Contact {
            plane_class: c.normal_form.class.name(),
            normal: c.normal_form.normal.to_array(),
            offset: c.normal_form.offset,
            c: c.c,
            deviation: c.deviation,
            case,
            theta,
            lambda,
            fitted_locus: c.fitted.to_string(),
            fit_residual: c.fit_residual,
            expected_locus: c.expected.map(|l| l.to_string()),
            locus_discrepancy: c.locus_discrepancy,
            coth_radius: c.printed_radius,
            sheet: c.sheet.name(),
            containment_residual: c.containment_residual,
            containment_tol: c.containment_tol,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Matching {
    pub passed: bool,
    pub samples: usize,
    pub tol: f64,
    pub g_gap: f64,
    pub f_gap: f64,
    pub phi_gap: f64,
    pub dg_gap: f64,
    pub df_gap: f64,
    pub dphi_gap: f64,
    pub locus_gap: f64,
}

impl From<&MatchingReport> for Matching {
    fn from(m: &MatchingReport) -> Self {
        Matching {
            passed: m.passed,
            samples: m.samples,
            tol: m.tol,
            g_gap: m.g_gap,
            f_gap: m.f_gap,
            phi_gap: m.phi_gap,
            dg_gap: m.dg_gap,
            df_gap: m.df_gap,
            dphi_gap: m.dphi_gap,
            locus_gap: m.locus_gap,
        }
    }
}
