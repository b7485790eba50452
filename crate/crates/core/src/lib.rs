//! Symplectic and contact Hamiltonian mechanics in global Darboux charts.
//!
//! The crate is organised bottom-up:
//!
//! * [`geometry`]: charts, points, tangent vectors and covectors, the
//!   structure tensors (`ω`, `η`, `dη`, Reeb field), musical isomorphisms,
//!   orthocomplements and submanifold classification.
//! * [`hamiltonian`]: scalar fields, Hamiltonian vector fields and the
//!   pointwise dissipation identities of contact dynamics.
//! * [`dynamics`]: Runge-Kutta flows, trajectories and invariant monitors.
//! * [`symmetry`]: concrete Lie group actions, generators and momentum maps.
//! * [`reduction`]: reduction at a momentum level, commutation checks and
//!   reconstruction of full dynamics.
//! * [`symplectification`]: the symplectic manifold `M × ℝ` built from a
//!   contact chart and the check that reduction and symplectification
//!   commute at the zero momentum level.
//!
//! Coordinates are laid out as `(q¹..qⁿ, p₁..pₙ)` on symplectic charts,
//! `(q, p, z)` on contact charts and `(q, p, z, t)` on symplectified charts.

// Negated comparisons are how NaN inputs get rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod corpus;
pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod hamiltonian;
mod linalg;
pub mod reduction;
pub mod sampling;
pub mod symmetry;
pub mod symplectification;

pub use error::{Error, Result};
pub use geometry::{Chart, ChartKind, Covector, Point, SubspaceBasis, TangentVector};
pub use hamiltonian::ScalarField;
