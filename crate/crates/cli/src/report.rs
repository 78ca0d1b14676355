use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};
use symsq_core::symsq::CheckStatus;
use symsq_core::Error;

/// Run parameters echoed into every report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub p: u64,
    pub precision: u32,
    pub tol: f64,
    pub cluster_tol: f64,
    pub seed: u64,
    pub samples: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    /// The identity or property being tested.
    pub identity: String,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub detail: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub config: RunConfig,
    pub status: CheckStatus,
    pub checks: Vec<Check>,
    pub artifacts: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

impl Report {
    pub fn new(command: &str, config: RunConfig) -> Self {
        Self {
            command: command.into(),
            config,
            status: CheckStatus::Pass,
            checks: Vec::new(),
            artifacts: BTreeMap::new(),
            elapsed_ms: None,
        }
    }

    pub fn push(&mut self, name: &str, identity: &str, status: CheckStatus, detail: Value) {
        self.checks.push(Check { name: name.into(), status, identity: identity.into(), detail });
    }

    pub fn check(&mut self, name: &str, identity: &str, ok: bool, detail: Value) {
        self.push(name, identity, CheckStatus::from_bool(ok), detail);
    }

    /// Records a computation that may fail; preconditions and missing
    /// precision become `unchecked`, anything else `fail`.
    pub fn outcome(&mut self, name: &str, identity: &str, r: Result<(bool, Value), Error>) {
        match r {
            Ok((ok, detail)) => self.check(name, identity, ok, detail),
            Err(e) => self.push(name, identity, status_of_error(&e), json!({ "error": e.to_string() })),
        }
    }

    pub fn artifact(&mut self, name: &str, value: Value) {
        self.artifacts.insert(name.into(), value);
    }

    pub fn has_failures(&self) -> bool {
        self.checks.iter().any(|c| c.status == CheckStatus::Fail)
    }

    /// Sorts checks by name and sets the overall status.
    pub fn finish(&mut self) {
        self.checks.sort_by(|a, b| a.name.cmp(&b.name));
        self.status = if self.has_failures() { CheckStatus::Fail } else { CheckStatus::Pass };
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

pub fn status_of_error(e: &Error) -> CheckStatus {
    match e {
        Error::Precondition(_) | Error::Unsupported(_) | Error::Precision(_) => CheckStatus::Unchecked,
        _ => CheckStatus::Fail,
    }
}

/// Tally of a battery: how many cases ran, which failed.
#[derive(Debug, Default)]
pub struct Tally {
    pub tested: usize,
    pub skipped: usize,
    pub failures: Vec<Value>,
}

impl Tally {
    pub fn record(&mut self, ok: bool, case: impl FnOnce() -> Value) {
        self.tested += 1;
        if !ok {
            self.failures.push(case());
        }
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn detail(&self) -> Value {
        let mut d = json!({ "tested": self.tested, "failures": self.failures.len() });
        if self.skipped > 0 {
            d["skipped"] = json!(self.skipped);
        }
        if !self.failures.is_empty() {
            d["examples"] = Value::Array(self.failures.iter().take(3).cloned().collect());
        }
        d
    }
}
