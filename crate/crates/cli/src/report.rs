//! Run reports: per-check residuals against tolerances, the overall status
//! and what is needed to reproduce the run.

use serde::Serialize;
use serde_json::Value;

use crate::checks::Comparison;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub id: String,
    /// Serialized as `null` when not finite.
    pub residual: f64,
    pub tolerance: f64,
    pub comparison: Comparison,
    pub pass: bool,
}

impl CheckResult {
    pub fn new(id: impl Into<String>, residual: f64, tolerance: f64, comparison: Comparison) -> Self {
        CheckResult {
            id: id.into(),
            residual,
            tolerance,
            comparison,
            pass: residual.is_finite() && comparison.holds(residual, tolerance),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub seed: u64,
    pub samples: usize,
    /// SHA-256 of the scenario file, or of the effective settings when the
    /// command runs without one.
    pub config_sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub status: Status,
    pub checks: Vec<CheckResult>,
    pub details: Value,
    pub provenance: Provenance,
}

impl Report {
    pub fn new(command: &str, checks: Vec<CheckResult>, details: Value, provenance: Provenance) -> Self {
        let status = if checks.iter().all(|c| c.pass) {
            Status::Pass
        } else {
            Status::Fail
        };
        Report {
            command: command.to_string(),
            status,
            checks,
            details,
            provenance,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn check(&self, id: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.id == id)
    }

    /// Pretty-printed JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn provenance() -> Provenance {
        Provenance {
            seed: 1,
            samples: 2,
            config_sha256: "00".into(),
        }
    }

    #[test]
    fn overall_status_requires_every_check() {
        let ok = CheckResult::new("a", 1e-13, 1e-12, Comparison::AtMost);
        let bad = CheckResult::new("b", 1e-3, 1e-12, Comparison::AtMost);
        assert!(Report::new("x", vec![ok.clone()], Value::Null, provenance()).passed());
        assert!(!Report::new("x", vec![ok, bad], Value::Null, provenance()).passed());
    }

    #[test]
    fn non_finite_residual_fails() {
        let c = CheckResult::new("a", f64::NAN, 1.0, Comparison::AtMost);
        assert!(!c.pass);
        let json = Report::new("x", vec![c], Value::Null, provenance()).to_json();
        assert!(json.contains("\"residual\": null"));
    }
}
