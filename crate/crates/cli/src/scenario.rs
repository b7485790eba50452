//! Scenario files: a strict JSON schema describing the system, an optional
//! symmetry, the initial state, the integrator and the checks to run.
//!
//! ```json
//! {
//!   "system": {
//!     "chart": "contact",
//!     "n": 1,
//!     "hamiltonian": {
//!       "family": "contact_damped",
//!       "mass": 1.0,
//!       "potential": { "kind": "quadratic", "stiffness": [1.0] },
//!       "gamma": 0.1
//!     }
//!   },
//!   "initial_state": [1.0, 0.0, 0.0],
//!   "integrator": { "method": "rk4", "step": 0.001, "t1": 10.0 },
//!   "checks": [{ "id": "relative_decay_residual", "tolerance": 1e-5 }],
//!   "outputs": { "csv": "damped.csv", "report": "damped_report.json" },
//!   "seed": 42
//! }
//! ```
//!
//! Unknown keys are rejected everywhere.

use std::fmt;

use darboux_core::dynamics::IntegratorConfig;
use darboux_core::hamiltonian::BuiltinHamiltonian;
use darboux_core::symmetry::{ActionFamily, GroupAction};
use darboux_core::{Chart, Point, ScalarField};
use serde::{Deserialize, Serialize};

use crate::checks;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemChart {
    Symplectic,
    Contact,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    pub chart: SystemChart,
    pub n: usize,
    pub hamiltonian: BuiltinHamiltonian,
}

/// Symmetry of the system. `mu` (or `mu0`) selects the momentum level for
/// reduction and defaults to the momentum of the initial state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum ActionSpec {
    LiftedTranslation {
        k: usize,
        #[serde(default)]
        mu: Option<Vec<f64>>,
    },
    /// Planar reduction at `μ = (0, 0, μ₀)`.
    #[serde(rename = "lifted_rotation_so3")]
    LiftedRotationSo3 {
        #[serde(default)]
        mu0: Option<f64>,
    },
    ContactTranslation {
        k: usize,
        #[serde(default)]
        mu: Option<Vec<f64>>,
    },
}

impl ActionSpec {
    pub fn family(&self) -> ActionFamily {
        match *self {
            ActionSpec::LiftedTranslation { k, .. } => ActionFamily::LiftedTranslation { k },
            ActionSpec::LiftedRotationSo3 { .. } => ActionFamily::LiftedRotationSo3,
            ActionSpec::ContactTranslation { k, .. } => ActionFamily::ContactTranslation { k },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckSpec {
    pub id: String,
    #[serde(default)]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    #[serde(default)]
    pub csv: Option<String>,
    #[serde(default)]
    pub report: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub system: SystemSpec,
    #[serde(default)]
    pub action: Option<ActionSpec>,
    pub initial_state: Vec<f64>,
    #[serde(default)]
    pub integrator: IntegratorConfig,
    #[serde(default)]
    pub checks: Vec<CheckSpec>,
    #[serde(default)]
    pub outputs: Outputs,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldError {
    pub path: String,
    pub message: String,
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

/// Every problem found in a scenario document, with the JSON path of the
/// offending field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioError {
    pub errors: Vec<FieldError>,
}

impl ScenarioError {
    fn single(path: impl Into<String>, message: impl Into<String>) -> Self {
        ScenarioError {
            errors: vec![FieldError {
                path: path.into(),
                message: message.into(),
            }],
        }
    }
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid scenario")?;
        for e in &self.errors {
            write!(f, "\n  {e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ScenarioError {}

pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let scenario: Scenario = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = match e.path().to_string() {
            p if p == "." => "(root)".to_string(),
            p => p,
        };
        ScenarioError::single(path, e.inner().to_string())
    })?;
    let errors = scenario.validate();
    if errors.is_empty() {
        Ok(scenario)
    } else {
        Err(ScenarioError { errors })
    }
}

impl Scenario {
    pub fn chart(&self) -> Result<Chart, darboux_core::Error> {
        match self.system.chart {
            SystemChart::Symplectic => Chart::symplectic(self.system.n),
            SystemChart::Contact => Chart::contact(self.system.n),
        }
    }

    pub fn hamiltonian(&self) -> Result<ScalarField, darboux_core::Error> {
        self.system.hamiltonian.field(self.chart()?)
    }

    pub fn initial_point(&self) -> Result<Point, darboux_core::Error> {
        Point::new(self.chart()?, self.initial_state.clone())
    }

    pub fn group_action(&self) -> Result<Option<GroupAction>, darboux_core::Error> {
        self.action
            .as_ref()
            .map(|a| GroupAction::new(a.family(), self.chart()?))
            .transpose()
    }

    fn validate(&self) -> Vec<FieldError> {
        let mut errors = Vec::new();
        let mut push = |path: &str, message: String| {
            errors.push(FieldError {
                path: path.to_string(),
                message,
            })
        };
        if self.system.n == 0 {
            push("system.n", "must be at least 1".into());
        }
        let chart = self.chart().ok().filter(|_| self.system.n > 0);
        if let Some(chart) = chart {
            let dim = chart.dim();
            if self.initial_state.len() != dim {
                push(
                    "initial_state",
                    format!(
                        "expected {dim} values for a {} chart with n = {}, found {}",
                        chart.kind(),
                        chart.n(),
                        self.initial_state.len()
                    ),
                );
            }
            if let Err(e) = self.system.hamiltonian.field(chart) {
                push("system.hamiltonian", e.to_string());
            }
            if let Some(spec) = &self.action {
                if let Err(e) = GroupAction::new(spec.family(), chart) {
                    push("action", e.to_string());
                }
                let (k, mu) = match spec {
                    ActionSpec::LiftedTranslation { k, mu } | ActionSpec::ContactTranslation { k, mu } => (*k, mu),
                    ActionSpec::LiftedRotationSo3 { mu0 } => {
                        if mu0.is_some_and(|m| !m.is_finite()) {
                            push("action.mu0", "must be finite".into());
                        }
                        (0, &None)
                    }
                };
                if let Some(mu) = mu {
                    if mu.len() != k {
                        push("action.mu", format!("expected {k} values, found {}", mu.len()));
                    }
                    if mu.iter().any(|m| !m.is_finite()) {
                        push("action.mu", "entries must be finite".into());
                    }
                }
            }
        }
        if self.initial_state.iter().any(|x| !x.is_finite()) {
            push("initial_state", "entries must be finite".into());
        }
        if let Err(e) = self.integrator.validate() {
            push("integrator", e.to_string());
        }
        for (i, c) in self.checks.iter().enumerate() {
            if !checks::is_known(&c.id) {
                push(
                    &format!("checks[{i}].id"),
                    format!("unknown check `{}`; known checks: {}", c.id, checks::KNOWN.join(", ")),
                );
            }
            if let Some(t) = c.tolerance {
                if !(t > 0.0 && t.is_finite()) {
                    push(&format!("checks[{i}].tolerance"), format!("must be positive and finite, got {t}"));
                }
            }
        }
        errors
    }

    /// Scenario-supplied tolerance for `id`, if any.
    pub fn tolerance(&self, id: &str) -> Option<f64> {
        self.checks.iter().find(|c| c.id == id).and_then(|c| c.tolerance)
    }
}
