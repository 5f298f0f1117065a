//! Machine-readable reports shared by the checker and the oracle.
//!
//! The JSON shape is frozen in `docs/report-schema.json`.

use serde::{Deserialize, Serialize};

use crate::check::{DeclOutcome, Status};
use crate::driver::FileResult;
use crate::syntax::{line_col, Diagnostic};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntryStatus {
    Accepted,
    Rejected,
    Passed,
    Failed,
    Written,
}

impl EntryStatus {
    pub fn is_ok(self) -> bool {
        !matches!(self, EntryStatus::Rejected | EntryStatus::Failed)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticJson {
    pub code: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
}

impl DiagnosticJson {
    pub fn new(d: &Diagnostic, source: Option<&str>) -> DiagnosticJson {
        let (line, column) = match source {
            Some(src) => {
                let (l, c) = line_col(src, d.span.start);
                (Some(l), Some(c))
            }
            None => (None, None),
        };
        DiagnosticJson {
            code: d.code.to_string(),
            message: d.message.clone(),
            line,
            column,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub name: String,
    pub status: EntryStatus,
    pub paper_ref: Option<String>,
    pub ms: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<DiagnosticJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    /// Number of cases an oracle suite enumerated.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cases: Option<u64>,
    /// Corpus declarations an oracle suite cross-checks.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub models: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub counterexamples: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Totals {
    pub total: usize,
    pub ok: usize,
    pub failed: usize,
    pub ms: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub file: String,
    pub declarations: Vec<Entry>,
    pub totals: Totals,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<DiagnosticJson>,
}

impl Report {
    pub fn new(file: impl Into<String>, declarations: Vec<Entry>) -> Report {
        let ok = declarations.iter().filter(|e| e.status.is_ok()).count();
        let timed: Vec<f64> = declarations.iter().filter_map(|e| e.ms).collect();
        let ms = if timed.is_empty() {
            None
        } else {
            Some(timed.iter().sum())
        };
        Report {
            file: file.into(),
            totals: Totals {
                total: declarations.len(),
                ok,
                failed: declarations.len() - ok,
                ms,
            },
            declarations,
            error: None,
        }
    }

    /// A report for a file that could not be read or parsed at all.
    pub fn failure(file: impl Into<String>, error: DiagnosticJson) -> Report {
        let mut r = Report::new(file, Vec::new());
        r.error = Some(error);
        r
    }

    pub fn from_file(result: &FileResult, source: &str) -> Report {
        let entries = result.outcomes.iter().map(|o| entry(o, source)).collect();
        Report::new(result.file.clone(), entries)
    }

    pub fn all_ok(&self) -> bool {
        self.error.is_none() && self.totals.failed == 0
    }

    /// The same report with timing fields cleared, for run-to-run comparison.
    pub fn without_timing(&self) -> Report {
        let mut r = self.clone();
        for e in &mut r.declarations {
            e.ms = e.ms.map(|_| 0.0);
        }
        r.totals.ms = r.totals.ms.map(|_| 0.0);
        r
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("reports always serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(e) = &self.error {
            let at = match (e.line, e.column) {
                (Some(l), Some(c)) => format!(":{l}:{c}"),
                _ => String::new(),
            };
            out.push_str(&format!("{}{at}: error[{}]: {}\n", self.file, e.code, e.message));
            return out;
        }
        for d in &self.declarations {
            let status = format!("{:?}", d.status).to_lowercase();
            let time = d.ms.map(|m| format!(" ({m:.1} ms)")).unwrap_or_default();
            out.push_str(&format!("{}: {} {}{}\n", self.file, status, d.name, time));
            if let Some(diag) = &d.diagnostic {
                let at = match (diag.line, diag.column) {
                    (Some(l), Some(c)) => format!(" at {l}:{c}"),
                    _ => String::new(),
                };
                out.push_str(&format!("    error[{}]{}: {}\n", diag.code, at, diag.message));
            }
            if let Some(detail) = &d.detail {
                out.push_str(&format!("    {detail}\n"));
            }
            if let Some(cases) = d.cases {
                out.push_str(&format!("    {cases} cases"));
                if !d.models.is_empty() {
                    out.push_str(&format!("; models {}", d.models.join(", ")));
                }
                out.push('\n');
            }
            for c in &d.counterexamples {
                out.push_str(&format!("    counterexample: {c}\n"));
            }
        }
        out.push_str(&format!(
            "{}: {} ok, {} failed\n",
            self.file, self.totals.ok, self.totals.failed
        ));
        out
    }
}

fn entry(o: &DeclOutcome, source: &str) -> Entry {
    let (status, diagnostic) = match &o.status {
        Status::Accepted => (EntryStatus::Accepted, None),
        Status::Rejected(d) => (EntryStatus::Rejected, Some(DiagnosticJson::new(d, Some(source)))),
    };
    Entry {
        name: o.name.to_string(),
        status,
        paper_ref: Some(o.provenance.clone()).filter(|p| !p.is_empty()),
        ms: Some(o.ms),
        diagnostic,
        detail: None,
        cases: None,
        models: Vec::new(),
        counterexamples: Vec::new(),
    }
}
