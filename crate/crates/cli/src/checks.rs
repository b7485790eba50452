//! Named checks and their default tolerances.
//!
//! | id | default tolerance |
//! |----|-------------------|
//! | `energy_drift` | 1e-8 |
//! | `relative_decay_residual` | 1e-5 |
//! | `rate_residual` | 1e-5 |
//! | `divergence_identity` | 1e-5 |
//! | `volume_ratio` | 1e-4 |
//! | `momentum_condition` | 1e-6 |
//! | `equivariance` | 1e-12 |
//! | `momentum_drift` | 1e-8 symplectic, 1e-6 contact |
//! | `commutation` | 1e-5 SO(3), 1e-6 lifted translations, 1e-7 contact translations |
//! | `level_set_drift` | 1e-7 |
//! | `hamiltonian_compatibility` | 1e-12 |
//! | `reeb_projection` | 1e-12 |
//! | `reconstruction` | 1e-4 SO(3) and lifted translations, 1e-8 contact translations |
//! | `closedness` | 1e-6 |
//! | `antisymmetry` | 0 (exact) |
//! | `nondegeneracy` | 1e-10 |
//! | `lifted_complement` | 1e-9 |
//! | `lifted_momentum` | 1e-12 |
//! | `lifted_invariance` | 1e-12 |
//! | `legendrian_lagrangian` | 0 disagreements |
//! | `commutativity` | 1e-12 |
//! | `well_defined` | 1e-12 |
//! | `mu_probe_scaling` | 1e-12 |
//! | `mu_probe_level_defect` | at least 1e-6 |
//! | `corpus_verdicts` | 0 mismatches |
//! | `complement_dimensions` | 0 failures |
//! | `flat_sharp` | 1e-12 |
//! | `sharp_lambda_kernel` | 1e-10 |
//! | `sharp_lambda_image` | 1e-10 |
//! | `double_complement` | 1e-9 |

use darboux_core::symmetry::ActionFamily;
use darboux_core::ChartKind;
use serde::Serialize;

pub const KNOWN: [&str; 30] = [
    "energy_drift",
    "relative_decay_residual",
    "rate_residual",
    "divergence_identity",
    "volume_ratio",
    "momentum_condition",
    "equivariance",
    "momentum_drift",
    "commutation",
    "level_set_drift",
    "hamiltonian_compatibility",
    "reeb_projection",
    "reconstruction",
    "closedness",
    "antisymmetry",
    "nondegeneracy",
    "lifted_complement",
    "lifted_momentum",
    "lifted_invariance",
    "legendrian_lagrangian",
    "commutativity",
    "well_defined",
    "mu_probe_scaling",
    "mu_probe_level_defect",
    "corpus_verdicts",
    "complement_dimensions",
    "flat_sharp",
    "sharp_lambda_kernel",
    "sharp_lambda_image",
    "double_complement",
];

pub fn is_known(id: &str) -> bool {
    KNOWN.contains(&id)
}

/// How a residual is compared with its tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Comparison {
    #[serde(rename = "<=")]
    AtMost,
    /// Used for obstructions that must be visibly nonzero.
    #[serde(rename = ">=")]
    AtLeast,
}

impl Comparison {
    pub fn holds(self, residual: f64, tolerance: f64) -> bool {
        match self {
            Comparison::AtMost => residual <= tolerance,
            Comparison::AtLeast => residual >= tolerance,
        }
    }
}

pub fn comparison(id: &str) -> Comparison {
    match id {
        "mu_probe_level_defect" => Comparison::AtLeast,
        _ => Comparison::AtMost,
    }
}

/// Default tolerance for `id`; some depend on the action family or chart.
pub fn default_tolerance(id: &str, family: Option<ActionFamily>, chart: Option<ChartKind>) -> f64 {
    use ActionFamily::*;
    match id {
        "energy_drift" => 1e-8,
        "relative_decay_residual" | "rate_residual" | "divergence_identity" => 1e-5,
        "volume_ratio" => 1e-4,
        "momentum_condition" => 1e-6,
        "momentum_drift" => match chart {
            Some(ChartKind::Contact) => 1e-6,
            _ => 1e-8,
        },
        "commutation" => match family {
            Some(LiftedRotationSo3) => 1e-5,
            Some(ContactTranslation { .. }) => 1e-7,
            _ => 1e-6,
        },
        "level_set_drift" => 1e-7,
        "reconstruction" => match family {
            Some(ContactTranslation { .. }) => 1e-8,
            _ => 1e-4,
        },
        "closedness" | "mu_probe_level_defect" => 1e-6,
        "antisymmetry" | "legendrian_lagrangian" | "corpus_verdicts" | "complement_dimensions" => 0.0,
        "nondegeneracy" | "sharp_lambda_kernel" | "sharp_lambda_image" => 1e-10,
        "lifted_complement" | "double_complement" => 1e-9,
        _ => 1e-12,
    }
}
