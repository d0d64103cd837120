//! The report document written to stdout, and its human-readable table.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fmt::Write as _;

pub const REPORT_FORMAT: &str = "bipencil-report";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    pub fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    /// 0 pass, 1 fail, 3 inconclusive.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Inconclusive => 3,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Inconclusive => "????",
        }
    }
}

impl From<bipencil::charts::eigdiff::Status> for Status {
    fn from(s: bipencil::charts::eigdiff::Status) -> Self {
        use bipencil::charts::eigdiff::Status as S;
        match s {
            S::Pass => Status::Pass,
            S::Fail => Status::Fail,
            S::Inconclusive => Status::Inconclusive,
        }
    }
}

/// A numeric residual never travels without the tolerance it was held to.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub value: f64,
    pub tolerance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<Residual>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, status: Status) -> Self {
        Check { name: name.into(), status, residual: None, witness: None, detail: None }
    }

    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Check::new(name, Status::from_bool(ok))
    }

    /// Passes iff `value ≤ tolerance`. JSON has no NaN, so a non-finite
    /// residual fails and is described in the detail instead.
    pub fn bounded(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        let mut c = Check::holds(name, value <= tolerance);
        if value.is_finite() {
            c.residual = Some(Residual { value, tolerance });
        } else {
            c.detail = Some(format!("non-finite residual (tolerance {tolerance:e})"));
        }
        c
    }

    pub fn witness(mut self, w: impl Into<String>) -> Self {
        self.witness = Some(w.into());
        self
    }

    pub fn detail(mut self, d: impl Into<String>) -> Self {
        let d = d.into();
        if !d.is_empty() {
            self.detail = Some(d);
        }
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommandEcho {
    pub name: String,
    pub argv: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Input {
    pub role: String,
    pub source: String,
    pub sha256: String,
}

impl Input {
    pub fn new(role: &str, source: &str, bytes: &[u8]) -> Self {
        Input { role: role.into(), source: source.into(), sha256: format!("{:x}", Sha256::digest(bytes)) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub format: String,
    pub version: u32,
    pub command: CommandEcho,
    pub inputs: Vec<Input>,
    pub results: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
    pub status: Status,
}

impl ReportDocument {
    pub fn new(name: &str, argv: &[String]) -> Self {
        ReportDocument {
            format: REPORT_FORMAT.into(),
            version: crate::formats::VERSION,
            command: CommandEcho { name: name.into(), argv: argv.to_vec() },
            inputs: Vec::new(),
            results: BTreeMap::new(),
            checks: Vec::new(),
            status: Status::Pass,
        }
    }

    pub fn result(&mut self, key: &str, value: impl Serialize) {
        self.results.insert(key.into(), serde_json::to_value(value).expect("results serialize"));
    }

    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    /// Any failure fails; otherwise any inconclusive check makes the
    /// report inconclusive.
    pub fn finish(&mut self) {
        let statuses = self.checks.iter().map(|c| c.status);
        self.status = if statuses.clone().any(|s| s == Status::Fail) {
            Status::Fail
        } else if statuses.clone().any(|s| s == Status::Inconclusive) {
            Status::Inconclusive
        } else {
            Status::Pass
        };
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "bipencil {}: {}", self.command.name, self.status.label());
        for (k, v) in &self.results {
            let shown = match v {
                Value::String(s) => s.clone(),
                Value::Number(_) | Value::Bool(_) => v.to_string(),
                _ => continue,
            };
            let _ = writeln!(out, "  {k:<28} {shown}");
        }
        for c in &self.checks {
            let _ = write!(out, "  [{}] {}", c.status.label(), c.name);
            if let Some(r) = c.residual {
                let _ = write!(out, "  residual {:.3e} (tolerance {:.1e})", r.value, r.tolerance);
            }
            if let Some(w) = &c.witness {
                let _ = write!(out, "  witness: {w}");
            }
            if let Some(d) = &c.detail {
                let _ = write!(out, "  ({d})");
            }
            out.push('\n');
        }
        out
    }
}
