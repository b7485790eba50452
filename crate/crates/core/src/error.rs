use thiserror::Error;

use crate::dynamics::FlowError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("chart mismatch: expected {expected}, found {found}")]
    ChartMismatch { expected: String, found: String },

    #[error("dimension mismatch for {what}: expected {expected}, found {found}")]
    Dimension {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("rank-deficient basis: smallest normalized singular value {0:e}")]
    RankDeficient(f64),

    #[error("linear solve residual {0:e} exceeds 1e-8 (corrupted chart data?)")]
    SolveFailed(f64),

    #[error("invalid argument: {0}")]
    Invalid(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("hamiltonian is not invariant under the action: |H(g·x) - H(x)| = {0:e}")]
    NotInvariant(f64),

    #[error("initial point is off the momentum level set: |J(x) - mu| = {0:e}")]
    OffLevelSet(f64),

    #[error(
        "contact reduction is only supported at mu = 0: the dissipative flow of an invariant \
         Hamiltonian rescales the momentum by exp(-∫R(H)dt), so only the zero level set is \
         preserved (requested mu = {0:?})"
    )]
    NonzeroContactLevel(Vec<f64>),

    #[error(
        "symplectification commutes with reduction only at mu = 0: the lifted momentum is \
         e^t J(x), so the lifted level set is not J^-1(mu) x R for mu != 0 (requested mu = {0:?})"
    )]
    NonzeroLiftedLevel(Vec<f64>),

    #[error("least-squares residual {0:e} exceeds 1e-6 in reconstruction")]
    Reconstruction(f64),

    #[error("integration failed: {0}")]
    Flow(Box<FlowError>),
}

impl From<FlowError> for Error {
    fn from(e: FlowError) -> Self {
        Error::Flow(Box::new(e))
    }
}
