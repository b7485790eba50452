//! Reduction at a momentum level for the three action families, the
//! commutation check `π ∘ Φ_t = Φ_t^μ ∘ π`, and reconstruction of full
//! trajectories from reduced ones.
//!
//! Each quotient `J⁻¹(μ)/G` is realized as an explicit chart with a
//! projection and a section:
//!
//! * translations of `q₁..q_k` (symplectic or contact): drop `q₁..q_k` and
//!   `p₁..p_k`; the section puts `q₁..q_k = 0`, `p₁..p_k = μ`;
//! * `SO(3)` at `μ = (0, 0, μ₀)`: `(q, p) ↦ (|q|, q·p/|q|)` with section
//!   `(r, p_r) ↦ q = (r, 0, 0), p = (p_r, μ₀/r, 0)`.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::dynamics::{attach_energy, flow, HamiltonianField, IntegratorConfig, Trajectory, VectorField};
use crate::geometry::{complement_lambda, complement_omega, reeb, ChartKind, Point, SubspaceBasis, TangentVector};
use crate::hamiltonian::{numeric_gradient, CentralPotential, ScalarField};
use crate::symmetry::{require_invariant, ActionFamily, GroupAction, GroupElement, MomentumValue};
use crate::{linalg, sampling, Chart, Error, Result};

/// Largest accepted `|J(x₀) − μ|` for a level-set initial point.
pub const LEVEL_SET_TOL: f64 = 1e-9;

/// Largest accepted least-squares residual when solving for `ξ(t)`.
pub const RECONSTRUCTION_TOL: f64 = 1e-6;

/// Step of the central difference giving `ḋ(t)` along the reduced flow.
const SECTION_VELOCITY_STEP: f64 = 1e-6;

/// Step of the central difference giving `ξ̇(t)` along the reduced flow.
const XI_RATE_STEP: f64 = 1e-4;

const MIN_RADIUS: f64 = 1e-12;

/// Seed of the sampled invariance precondition; fixed so reductions are
/// reproducible.
const INVARIANCE_SEED: u64 = 0x5eed;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Quotient {
    Translation { k: usize },
    PlanarRotation { mu0: f64 },
}

/// A reduced system `(M_μ, H_μ)` with its projection `π_μ` and a section.
#[derive(Debug, Clone)]
pub struct ReducedSystem {
    action: GroupAction,
    quotient: Quotient,
    reduced_chart: Chart,
    full_h: ScalarField,
    reduced_h: ScalarField,
    mu: MomentumValue,
}

/// Full-chart indices kept by a translation quotient.
fn kept_indices(full: Chart, k: usize) -> Vec<usize> {
    let n = full.n();
    let mut kept: Vec<usize> = (k..n).chain(n + k..2 * n).collect();
    kept.extend(full.z_index());
    kept
}

fn random_points(chart: Chart, count: usize) -> Vec<Point> {
    let mut rng = sampling::rng(INVARIANCE_SEED);
    (0..count).map(|_| sampling::point(&mut rng, chart, 2.0)).collect()
}

fn translation_reduction(h: &ScalarField, family: ActionFamily, k: usize, mu: &[f64]) -> Result<ReducedSystem> {
    let full = h.chart();
    let action = GroupAction::new(family, full)?;
    if mu.len() != k {
        return Err(Error::Dimension {
            what: "momentum level",
            expected: k,
            found: mu.len(),
        });
    }
    if mu.iter().any(|m| !m.is_finite()) {
        return Err(Error::NonFinite("momentum level".into()));
    }
    require_invariant(&action, h, &random_points(full, 16), INVARIANCE_SEED)?;
    let n = full.n();
    let reduced_chart = Chart::new(full.kind(), n - k)?;
    let kept = kept_indices(full, k);
    let level = mu.to_vec();
    let (dim, kept2) = (full.dim(), kept.clone());
    let embed = move |y: &[f64]| {
        let mut x = vec![0.0; dim];
        x[n..n + k].copy_from_slice(&level);
        for (j, &i) in kept2.iter().enumerate() {
            x[i] = y[j];
        }
        x
    };
    let reduced_h = h.pull_back_embedding(reduced_chart, format!("{}_mu", h.name()), embed, kept);
    Ok(ReducedSystem {
        action,
        quotient: Quotient::Translation { k },
        reduced_chart,
        full_h: h.clone(),
        reduced_h,
        mu: MomentumValue::new(mu.to_vec()),
    })
}

/// Reduction of a symplectic chart by translations of `q₁..q_k` at level
/// `μ ∈ ℝᵏ`. Requires `k < n` and a translation-invariant `H`.
pub fn reduce_translation_symplectic(h: &ScalarField, k: usize, mu: &[f64]) -> Result<ReducedSystem> {
    h.chart().expect(ChartKind::Symplectic)?;
    if k >= h.chart().n() {
        return Err(Error::Invalid(format!(
            "k = {k} leaves no degrees of freedom on a chart with n = {}",
            h.chart().n()
        )));
    }
    translation_reduction(h, ActionFamily::LiftedTranslation { k }, k, mu)
}

/// Reduction of a contact chart by translations of `q₁..q_k`. Only the
/// zero level is accepted: along the flow of an invariant `H` the momentum
/// obeys `Ĵ(t) = Ĵ(0) exp(−∫𝓡(H) dt)`, so no other level is preserved.
pub fn reduce_contact_translation(h: &ScalarField, k: usize, mu: &[f64]) -> Result<ReducedSystem> {
    h.chart().expect(ChartKind::Contact)?;
    if mu.iter().any(|m| *m != 0.0) {
        return Err(Error::NonzeroContactLevel(mu.to_vec()));
    }
    translation_reduction(h, ActionFamily::ContactTranslation { k }, k, mu)
}

/// Reduction of a central-potential system on `T*ℝ³` at `μ = (0, 0, μ₀)`,
/// `μ₀ ≠ 0`. The reduced Hamiltonian is
/// `H_μ(r, p_r) = p_r²/(2m) + μ₀²/(2m r²) + U(r)`.
pub fn reduce_so3(central: &CentralPotential, mu0: f64) -> Result<ReducedSystem> {
    if mu0 == 0.0 || !mu0.is_finite() {
        return Err(Error::Invalid(format!(
            "SO(3) reduction needs a finite mu0 != 0 for a free action on the level set, got {mu0}"
        )));
    }
    let full = Chart::symplectic(3)?;
    let full_h = central.field(full)?;
    let action = GroupAction::new(ActionFamily::LiftedRotationSo3, full)?;
    require_invariant(&action, &full_h, &random_points(full, 16), INVARIANCE_SEED)?;
    let reduced_chart = Chart::symplectic(1)?;
    let (m, radial) = (central.mass, central.radial);
    let reduced_h = ScalarField::new(reduced_chart, "H_mu", move |y| {
        y[1] * y[1] / (2.0 * m) + mu0 * mu0 / (2.0 * m * y[0] * y[0]) + radial.value(y[0])
    })
    .with_gradient(move |y| {
        vec![
            -mu0 * mu0 / (m * y[0] * y[0] * y[0]) + radial.derivative(y[0]),
            y[1] / m,
        ]
    });
    Ok(ReducedSystem {
        action,
        quotient: Quotient::PlanarRotation { mu0 },
        reduced_chart,
        full_h,
        reduced_h,
        mu: MomentumValue::new(vec![0.0, 0.0, mu0]),
    })
}

impl ReducedSystem {
    pub fn reduced_chart(&self) -> Chart {
        self.reduced_chart
    }

    pub fn full_chart(&self) -> Chart {
        self.action.chart()
    }

    pub fn reduced_h(&self) -> &ScalarField {
        &self.reduced_h
    }

    pub fn full_h(&self) -> &ScalarField {
        &self.full_h
    }

    pub fn mu(&self) -> &MomentumValue {
        &self.mu
    }

    pub fn family(&self) -> ActionFamily {
        self.action.family()
    }

    pub fn action(&self) -> &GroupAction {
        &self.action
    }

    fn project_raw(&self, x: &[f64]) -> Result<Vec<f64>> {
        match self.quotient {
            Quotient::Translation { k } => Ok(kept_indices(self.full_chart(), k).iter().map(|&i| x[i]).collect()),
            Quotient::PlanarRotation { .. } => {
                let r = linalg::norm(&x[..3]);
                if r < MIN_RADIUS {
                    return Err(Error::Domain(format!("projection is singular at |q| = {r:e}")));
                }
                Ok(vec![r, linalg::dot(&x[..3], &x[3..6]) / r])
            }
        }
    }

    fn section_raw(&self, y: &[f64]) -> Result<Vec<f64>> {
        match self.quotient {
            Quotient::Translation { k } => {
                let full = self.full_chart();
                let n = full.n();
                let mut x = vec![0.0; full.dim()];
                x[n..n + k].copy_from_slice(self.mu.components());
                for (j, i) in kept_indices(full, k).into_iter().enumerate() {
                    x[i] = y[j];
                }
                Ok(x)
            }
            Quotient::PlanarRotation { mu0 } => {
                let r = y[0];
                if !(r > MIN_RADIUS) {
                    return Err(Error::Domain(format!("section needs r > 0, got r = {r}")));
                }
                Ok(vec![r, 0.0, 0.0, y[1], mu0 / r, 0.0])
            }
        }
    }

    /// `π_μ(x)`.
    pub fn project(&self, pt: &Point) -> Result<Point> {
        check_chart(self.full_chart(), pt)?;
        Point::new(self.reduced_chart, self.project_raw(pt.coords())?)
    }

    /// A point of `J⁻¹(μ)` over `y`.
    pub fn section(&self, y: &Point) -> Result<Point> {
        check_chart(self.reduced_chart, y)?;
        Point::new(self.full_chart(), self.section_raw(y.coords())?)
    }

    /// `T_xπ_μ · v`.
    pub fn project_tangent(&self, v: &TangentVector) -> Result<TangentVector> {
        let x = v.base().coords();
        let base = self.project(v.base())?;
        let c = v.components();
        let comps = match self.quotient {
            Quotient::Translation { k } => kept_indices(self.full_chart(), k).iter().map(|&i| c[i]).collect(),
            Quotient::PlanarRotation { .. } => {
                let (q, p) = (&x[..3], &x[3..6]);
                let r = linalg::norm(q);
                let qp = linalg::dot(q, p);
                let dr = linalg::dot(q, &c[..3]) / r;
                let dpr = (linalg::dot(p, &c[..3]) + linalg::dot(q, &c[3..6])) / r - qp * dr / (r * r);
                vec![dr, dpr]
            }
        };
        TangentVector::new(&base, comps)
    }

    /// Derivative of the section: lifts `w ∈ T_yM_μ` to `T_{section(y)}J⁻¹(μ)`.
    pub fn section_tangent(&self, w: &TangentVector) -> Result<TangentVector> {
        let base = self.section(w.base())?;
        let c = w.components();
        let comps = match self.quotient {
            Quotient::Translation { k } => {
                let mut v = vec![0.0; self.full_chart().dim()];
                for (j, i) in kept_indices(self.full_chart(), k).into_iter().enumerate() {
                    v[i] = c[j];
                }
                v
            }
            Quotient::PlanarRotation { mu0 } => {
                let r = w.base().coords()[0];
                vec![c[0], 0.0, 0.0, c[1], -mu0 * c[0] / (r * r), 0.0]
            }
        };
        TangentVector::new(&base, comps)
    }

    /// `|J(x) − μ|`.
    pub fn level_set_distance(&self, pt: &Point) -> Result<f64> {
        Ok(self.action.momentum(pt)?.distance(&self.mu))
    }

    /// `|H_μ(π_μ(x)) − H(x)|`.
    pub fn hamiltonian_compatibility(&self, pt: &Point) -> Result<f64> {
        Ok((self.reduced_h.value(&self.project(pt)?)? - self.full_h.value(pt)?).abs())
    }

    /// `|T_xπ_μ(𝓡(x)) − 𝓡_μ(π_μ(x))|` on contact reductions.
    pub fn reeb_projection_residual(&self, pt: &Point) -> Result<f64> {
        let pushed = self.project_tangent(&reeb(pt)?)?;
        let target = reeb(pushed.base())?;
        Ok(linalg::max_abs(
            &pushed
                .components()
                .iter()
                .zip(target.components())
                .map(|(a, b)| a - b)
                .collect::<Vec<_>>(),
        ))
    }

    fn require_on_level(&self, pt: &Point) -> Result<()> {
        let d = self.level_set_distance(pt)?;
        if d < LEVEL_SET_TOL {
            Ok(())
        } else {
            Err(Error::OffLevelSet(d))
        }
    }

    /// The group element `g₀` with `x = Φ_{g₀}(section(π_μ(x)))`.
    pub fn section_offset(&self, pt: &Point) -> Result<GroupElement> {
        self.require_on_level(pt)?;
        let x = pt.coords();
        Ok(match self.quotient {
            Quotient::Translation { k } => GroupElement::Translation(x[..k].to_vec()),
            Quotient::PlanarRotation { .. } => {
                let angle = x[1].atan2(x[0]);
                self.action.exp(&self.action.basis(2), angle)?
            }
        })
    }

    /// Integrates the full flow from `x₀` and the reduced flow from
    /// `π_μ(x₀)` on the same grid and compares `π_μ(Φ_t(x₀))` with
    /// `Φ_t^μ(π_μ(x₀))`.
    pub fn check_commutation(&self, x0: &Point, cfg: &IntegratorConfig) -> Result<CommutationReport> {
        self.require_on_level(x0)?;
        let full = flow(&HamiltonianField::new(&self.full_h)?, x0, cfg)?;
        let reduced = flow(&HamiltonianField::new(&self.reduced_h)?, &self.project(x0)?, cfg)?;
        let deviations = full
            .states()
            .iter()
            .zip(reduced.states())
            .map(|(x, y)| {
                let px = self.project_raw(x)?;
                Ok(px.iter().zip(y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            })
            .collect::<Result<Vec<f64>>>()?;
        Ok(CommutationReport {
            max_deviation: deviations.iter().copied().fold(0.0, f64::max),
            times: full.times().to_vec(),
            deviations,
        })
    }

    /// Solves `ξ_M(d) = X_H(d) − ḋ` at `d = section(y)` by least squares
    /// over the algebra basis.
    fn algebra_velocity(&self, full: &HamiltonianField, reduced: &HamiltonianField, y: &[f64]) -> Result<Vec<f64>> {
        let d = self.section_raw(y)?;
        let w = reduced.eval(y)?;
        let shift = |s: f64| -> Vec<f64> { y.iter().zip(&w).map(|(a, b)| a + s * b).collect() };
        let plus = self.section_raw(&shift(SECTION_VELOCITY_STEP))?;
        let minus = self.section_raw(&shift(-SECTION_VELOCITY_STEP))?;
        let xh = full.eval(&d)?;
        let rhs: Vec<f64> = (0..d.len())
            .map(|i| xh[i] - (plus[i] - minus[i]) / (2.0 * SECTION_VELOCITY_STEP))
            .collect();
        let m = self.action.algebra_dim();
        let cols: Vec<Vec<f64>> = (0..m)
            .map(|i| self.action.generator_raw(&linalg::unit(m, i), &d))
            .collect();
        let a = DMatrix::from_fn(d.len(), m, |r, c| cols[c][r]);
        let (xi, residual) = linalg::least_squares(&a, &rhs);
        if !(residual <= RECONSTRUCTION_TOL) {
            return Err(Error::Reconstruction(residual));
        }
        if let Quotient::PlanarRotation { .. } = self.quotient {
            let off_axis = xi[0].abs().max(xi[1].abs());
            if !(off_axis <= RECONSTRUCTION_TOL) {
                return Err(Error::Reconstruction(off_axis));
            }
        }
        Ok(xi)
    }

    /// Reconstructs `c(t) = Φ_{g(t)} d(t)` with `d = section ∘ y` and
    /// `g(0) = e`, so `c(0) = section(y(0))`.
    pub fn reconstruct(&self, reduced: &Trajectory) -> Result<Trajectory> {
        self.reconstruct_from(reduced, &self.action.identity())
    }

    /// As [`reconstruct`](Self::reconstruct) with `g(0) = g₀`; pass
    /// [`section_offset`](Self::section_offset) of the full initial point
    /// to reproduce a full trajectory that does not start on the section.
    ///
    /// `ξ(t)` comes from the algebraic problem at each sample and `g(t)` from
    /// the endpoint-corrected trapezoid rule
    /// `s_{i+1} = s_i + h/2 (ξ_i + ξ_{i+1}) + h²/12 (ξ̇_i − ξ̇_{i+1})`.
    pub fn reconstruct_from(&self, reduced: &Trajectory, g0: &GroupElement) -> Result<Trajectory> {
        if reduced.chart() != self.reduced_chart {
            return Err(Error::ChartMismatch {
                expected: self.reduced_chart.to_string(),
                found: reduced.chart().to_string(),
            });
        }
        let full_field = HamiltonianField::new(&self.full_h)?;
        let reduced_field = HamiltonianField::new(&self.reduced_h)?;
        let mut xis = Vec::with_capacity(reduced.len());
        let mut rates = Vec::with_capacity(reduced.len());
        for y in reduced.states() {
            xis.push(self.algebra_velocity(&full_field, &reduced_field, y)?);
            let w = reduced_field.eval(y)?;
            let at = |s: f64| -> Result<Vec<f64>> {
                let ys: Vec<f64> = y.iter().zip(&w).map(|(a, b)| a + s * b).collect();
                self.algebra_velocity(&full_field, &reduced_field, &ys)
            };
            let (plus, minus) = (at(XI_RATE_STEP)?, at(-XI_RATE_STEP)?);
            rates.push(
                plus.iter()
                    .zip(&minus)
                    .map(|(a, b)| (a - b) / (2.0 * XI_RATE_STEP))
                    .collect::<Vec<f64>>(),
            );
        }
        let m = self.action.algebra_dim();
        let mut s = vec![0.0; m];
        let mut out = Trajectory::new(self.full_chart());
        let times = reduced.times();
        for i in 0..reduced.len() {
            if i > 0 {
                let h = times[i] - times[i - 1];
                for j in 0..m {
                    s[j] += h / 2.0 * (xis[i - 1][j] + xis[i][j]) + h * h / 12.0 * (rates[i - 1][j] - rates[i][j]);
                }
            }
            let g = self
                .action
                .compose(g0, &self.action.exp(&crate::symmetry::AlgebraElement::new(s.clone())?, 1.0)?)?;
            let d = self.section_raw(&reduced.states()[i])?;
            out.push(times[i], self.action.act_raw(&g, &d));
        }
        attach_energy(&mut out, &self.full_h)?;
        Ok(out)
    }
}

fn check_chart(expected: Chart, pt: &Point) -> Result<()> {
    if pt.chart() == expected {
        Ok(())
    } else {
        Err(Error::ChartMismatch {
            expected: expected.to_string(),
            found: pt.chart().to_string(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CommutationReport {
    pub max_deviation: f64,
    pub times: Vec<f64>,
    pub deviations: Vec<f64>,
}

/// Residuals of the level-set/orbit relations at a point of `J⁻¹(μ)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TangencyReport {
    /// Subspace-equality residual between the orthocomplement of
    /// `T_xJ⁻¹(μ)` (`ω` or `Λ`) and `T_x(Gx)`.
    pub complement_residual: f64,
    /// Containment residual of `T_x(Gx)` in `T_xJ⁻¹(μ)`.
    pub orbit_in_level_residual: f64,
    /// Contact charts: projection residual of `𝓡(x)` on `T_xJ⁻¹(μ)`.
    pub reeb_residual: Option<f64>,
    pub level_rank: usize,
    pub orbit_rank: usize,
}

/// Compares `T_xJ⁻¹(μ)` (null space of the finite-difference momentum
/// Jacobian) with the orbit tangent `T_x(Gx)` spanned by the generators.
pub fn level_set_tangency_check(action: &GroupAction, pt: &Point) -> Result<TangencyReport> {
    if !action.family().is_abelian() {
        return Err(Error::Invalid(
            "level-set tangency is checked for abelian families, where G_mu = G".into(),
        ));
    }
    let m = action.algebra_dim();
    let dim = pt.chart().dim();
    let rows: Vec<Vec<f64>> = (0..m)
        .map(|i| numeric_gradient(&|x: &[f64]| action.momentum_raw(x)[i], pt.coords()))
        .collect();
    let smallest = linalg::min_normalized_singular(&rows, dim);
    if smallest <= crate::geometry::INDEPENDENCE_TOL {
        return Err(Error::RankDeficient(smallest));
    }
    let level = SubspaceBasis::new(pt, linalg::null_space(&rows, dim))?;
    let orbit = SubspaceBasis::spanned_by(
        pt,
        &(0..m)
            .map(|i| action.generator_raw(&linalg::unit(m, i), pt.coords()))
            .collect::<Vec<_>>(),
    )?;
    let complement = match pt.chart().kind() {
        ChartKind::Contact => complement_lambda(&level)?,
        _ => complement_omega(&level)?,
    };
    let reeb_residual = match pt.chart().kind() {
        ChartKind::Contact => Some(level.projection_residual(reeb(pt)?.components())),
        _ => None,
    };
    Ok(TangencyReport {
        complement_residual: complement.equality_residual(&orbit),
        orbit_in_level_residual: level.containment_residual(&orbit),
        reeb_residual,
        level_rank: level.rank(),
        orbit_rank: orbit.rank(),
    })
}
