//! Experiment reports and their canonical JSON / CSV forms.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::{LabError, Result};

/// One measured quantity compared against its bound.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub measured: Value,
    /// The bound as evaluated at this instance, e.g. `">= 4 (2^{q/2}, q=4)"`.
    pub bound: String,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, measured: impl Serialize, bound: impl Into<String>, pass: bool) -> Self {
        Check { name: name.into(), measured: serde_json::to_value(measured).expect("measured value"), bound: bound.into(), pass }
    }
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct Report {
    pub id: String,
    pub kind: String,
    /// The claim probed, written as the bound expression it checks.
    pub claim: String,
    pub params: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duration_ms: Option<u64>,
}

impl Report {
    pub fn new(id: impl Into<String>, kind: &str, claim: impl Into<String>) -> Self {
        Report { id: id.into(), kind: kind.to_string(), claim: claim.into(), params: BTreeMap::new(), checks: Vec::new(), pass: true, duration_ms: None }
    }

    pub fn param(mut self, key: &str, value: impl Serialize) -> Self {
        self.params.insert(key.to_string(), serde_json::to_value(value).expect("param value"));
        self
    }

    pub fn check(&mut self, check: Check) {
        self.pass &= check.pass;
        self.checks.push(check);
    }
}

/// Reports of a named suite; passes iff every report passes.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub reports: Vec<Report>,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duration_ms: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(LabError::usage(format!("unknown format {s:?}, expected json|csv"))),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Csv => "csv",
        })
    }
}

/// JSON with keys sorted at every level, followed by a newline.
pub fn canonical_json(value: &impl Serialize) -> String {
    // `serde_json::Map` is ordered by key unless `preserve_order` is enabled.
    let v = serde_json::to_value(value).expect("report json");
    let mut s = serde_json::to_string_pretty(&v).expect("report json");
    s.push('\n');
    s
}

const CSV_HEADER: [&str; 5] = ["report", "check", "measured", "bound", "pass"];

fn csv_rows(reports: &[Report]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("csv");
    for r in reports {
        for c in &r.checks {
            let measured = serde_json::to_string(&c.measured).expect("csv");
            w.write_record([r.id.as_str(), &c.name, &measured, &c.bound, if c.pass { "true" } else { "false" }]).expect("csv");
        }
    }
    String::from_utf8(w.into_inner().expect("csv")).expect("csv utf8")
}

pub fn emit_report(report: &Report, format: Format) -> String {
    match format {
        Format::Json => canonical_json(report),
        Format::Csv => csv_rows(std::slice::from_ref(report)),
    }
}

pub fn emit_suite(suite: &SuiteReport, format: Format) -> String {
    match format {
        Format::Json => canonical_json(suite),
        Format::Csv => csv_rows(&suite.reports),
    }
}

/// A saved report file: a single report or a suite.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Saved {
    Suite(SuiteReport),
    Single(Report),
}

impl Saved {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| LabError::usage(format!("not a report: {e}")))
    }

    pub fn emit(&self, format: Format) -> String {
        match self {
            Saved::Suite(s) => emit_suite(s, format),
            Saved::Single(r) => emit_report(r, format),
        }
    }

    pub fn pass(&self) -> bool {
        match self {
            Saved::Suite(s) => s.pass,
            Saved::Single(r) => r.pass,
        }
    }
}
