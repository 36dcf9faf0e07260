use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::catalog::CheckInfo;
use crate::scenario::SCHEMA_VERSION;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    /// Every residual is exactly zero or below tolerance.
    Pass,
    Fail,
    /// Decided at sample points rather than exactly.
    Sampled,
    /// A limit does not exist; reported as content.
    Diverged,
    /// The check could not run on this input.
    Rejected,
    /// The check stopped with an internal error.
    Error,
}

impl Status {
    pub fn label(&self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Sampled => "SAMPLED",
            Status::Diverged => "DIVERGED",
            Status::Rejected => "REJECTED",
            Status::Error => "ERROR",
        }
    }
}

/// One nonzero symbolic residual, or one numeric norm with its gate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Residual {
    pub label: String,
    pub value: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

impl Residual {
    pub fn symbolic(label: impl Into<String>, value: impl Into<String>) -> Self {
        Residual {
            label: label.into(),
            value: Value::String(value.into()),
            tolerance: None,
        }
    }

    pub fn numeric(label: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Residual {
            label: label.into(),
            value: number(value),
            tolerance: Some(tolerance),
        }
    }

    pub fn within_tolerance(&self) -> bool {
        match (self.value.as_f64(), self.tolerance) {
            (Some(v), Some(t)) => v < t,
            _ => false,
        }
    }
}

/// JSON number, or the string "NaN"/"inf" for non-finite values.
pub fn number(v: f64) -> Value {
    serde_json::Number::from_f64(v)
        .map(Value::Number)
        .unwrap_or_else(|| Value::String(format!("{}", v)))
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub operation: &'static str,
    pub asserts: &'static str,
    pub status: Status,
    pub verdict: String,
    pub residuals: Vec<Residual>,
    pub details: Map<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(skip)]
    pub seconds: f64,
}

impl CheckResult {
    pub fn new(info: &'static CheckInfo) -> Self {
        CheckResult {
            name: info.name,
            operation: info.operation,
            asserts: info.asserts,
            status: Status::Pass,
            verdict: String::new(),
            residuals: Vec::new(),
            details: Map::new(),
            message: None,
            seconds: 0.0,
        }
    }

    pub fn detail(&mut self, key: &str, v: impl Into<Value>) {
        self.details.insert(key.to_string(), v.into());
    }

    /// Pass exactly when there are no symbolic residuals and every numeric
    /// residual is below its tolerance.
    pub fn settle(&mut self, pass: &str, fail: &str) {
        let ok = self
            .residuals
            .iter()
            .all(|r| r.tolerance.is_some() && r.within_tolerance());
        self.status = if ok { Status::Pass } else { Status::Fail };
        self.verdict = if ok { pass } else { fail }.to_string();
    }

    pub fn stop(&mut self, status: Status, verdict: &str, message: impl Into<String>) {
        self.status = status;
        self.verdict = verdict.to_string();
        self.message = Some(message.into());
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub schema: u32,
    pub scenario: String,
    pub outcome: &'static str,
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn new(scenario: &str, checks: Vec<CheckResult>) -> Self {
        let mut r = Report {
            tool: "algebroid",
            version: env!("CARGO_PKG_VERSION"),
            schema: SCHEMA_VERSION,
            scenario: scenario.to_string(),
            outcome: "pass",
            checks,
        };
        r.outcome = match r.exit_code() {
            0 => "pass",
            1 => "fail",
            2 => "rejected",
            _ => "error",
        };
        r
    }

    /// 0 when every check passes (verdicts are content), 1 on a failed
    /// check, 2 when a check rejects its input, 3 on an internal error.
    pub fn exit_code(&self) -> i32 {
        let has = |s: Status| self.checks.iter().any(|c| c.status == s);
        if has(Status::Error) {
            3
        } else if has(Status::Rejected) {
            2
        } else if has(Status::Fail) {
            1
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "scenario {}", self.scenario);
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{:<9}{:<28}{} ({:.2} s)",
                c.status.label(),
                c.name,
                c.verdict,
                c.seconds
            );
            if let Some(m) = &c.message {
                let _ = writeln!(out, "{:9}{}", "", m);
            }
            for r in &c.residuals {
                let value = match &r.value {
                    Value::String(s) => s.clone(),
                    v => v.to_string(),
                };
                match r.tolerance {
                    Some(t) => {
                        let _ =
                            writeln!(out, "{:9}{} = {} (tolerance {:e})", "", r.label, value, t);
                    }
                    None => {
                        let _ = writeln!(out, "{:9}{} = {}", "", r.label, value);
                    }
                }
            }
        }
        let _ = writeln!(out, "outcome: {}", self.outcome);
        out
    }
}
