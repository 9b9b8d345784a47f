//! Verification and cohomology reports with deterministic JSON rendering.

use serde::Serialize;
use serde_json::{json, Value};

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// pretty-printed residual; "0" when the identity holds
    pub residual: String,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq, Default)]
pub struct VerificationReport {
    pub id: String,
    pub passed: bool,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn new(id: &str) -> Self {
        VerificationReport { id: id.to_string(), passed: true, ..Default::default() }
    }

    /// Record an identity whose residual should be zero.
    pub fn residual(&mut self, name: impl Into<String>, residual: String) {
        let passed = residual == "0";
        self.push(Check { name: name.into(), passed, residual, detail: String::new() });
    }

    /// Record a boolean property.
    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        let residual = if passed { "0" } else { "fail" }.to_string();
        self.push(Check { name: name.into(), passed, residual, detail: detail.into() });
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub fn push(&mut self, c: Check) {
        self.passed &= c.passed;
        self.checks.push(c);
    }

    pub fn absorb(&mut self, prefix: &str, other: VerificationReport) {
        for mut c in other.checks {
            c.name = format!("{prefix}{}", c.name);
            self.push(c);
        }
        self.notes.extend(other.notes);
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }

    pub fn summary(&self) -> String {
        let failed = self.failures();
        if failed.is_empty() {
            format!("{}: pass ({} checks)", self.id, self.checks.len())
        } else {
            let names: Vec<_> = failed.iter().take(3).map(|c| c.name.as_str()).collect();
            format!("{}: FAIL ({} of {} checks failed: {})", self.id, failed.len(), self.checks.len(), names.join(", "))
        }
    }
}

/// Pretty JSON with a trailing newline. Object keys come out sorted.
pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json renders");
    s.push('\n');
    s
}

pub fn dim_json(dim: usize) -> Value {
    json!({ "dimH": dim })
}
