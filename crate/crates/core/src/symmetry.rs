//! Lie group actions: cotangent-lifted translations, the cotangent lift of
//! `SO(3)`, and translations of a contact chart.
//!
//! `𝔤*` is identified with `ℝ^dim 𝔤` through the dot product throughout, so
//! momenta and algebra elements are plain arrays. `so(3)` is identified with
//! `ℝ³` by the hat map `ξ ↦ ξ̂`, `ξ̂ v = ξ × v`.

use nalgebra::{Matrix3, Vector3};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dynamics::{cumulative_trapezoid, Trajectory};
use crate::geometry::{flat_symplectic, ChartKind, Point, TangentVector};
use crate::hamiltonian::{self, numeric_gradient, xh_contact_raw, ScalarField};
use crate::{linalg, sampling, Chart, Error, Result};

/// Tolerance of the sampled invariance precondition `|H(g·x) − H(x)|`,
/// relative to `max(1, |H(x)|)`.
pub const INVARIANCE_TOL: f64 = 1e-9;

const ROTATION_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum ActionFamily {
    /// `q_{1..k} ↦ q_{1..k} + a` on a symplectic chart, `p` unchanged.
    LiftedTranslation { k: usize },
    /// `(q, p) ↦ (Oq, Op)` on the symplectic chart with `n = 3`.
    #[serde(rename = "lifted_rotation_so3")]
    LiftedRotationSo3,
    /// `q_{1..k} ↦ q_{1..k} + a` on a contact chart, `p` and `z` unchanged.
    ContactTranslation { k: usize },
}

impl ActionFamily {
    pub const NAMES: [&'static str; 3] = ["lifted_translation", "lifted_rotation_so3", "contact_translation"];

    pub fn name(&self) -> &'static str {
        match self {
            ActionFamily::LiftedTranslation { .. } => Self::NAMES[0],
            ActionFamily::LiftedRotationSo3 => Self::NAMES[1],
            ActionFamily::ContactTranslation { .. } => Self::NAMES[2],
        }
    }

    pub fn is_abelian(&self) -> bool {
        !matches!(self, ActionFamily::LiftedRotationSo3)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GroupElement {
    Translation(Vec<f64>),
    Rotation(Matrix3<f64>),
}

impl GroupElement {
    /// A rotation, rejecting matrices that are not orthonormal with
    /// positive determinant.
    pub fn rotation(o: Matrix3<f64>) -> Result<Self> {
        let defect = (o.transpose() * o - Matrix3::identity()).norm();
        if !(defect < ROTATION_TOL) || !(o.determinant() > 0.0) {
            return Err(Error::Invalid(format!(
                "not a rotation: |OᵗO − I| = {defect:e}, det = {}",
                o.determinant()
            )));
        }
        Ok(GroupElement::Rotation(o))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement(Vec<f64>);

impl AlgebraElement {
    pub fn new(components: Vec<f64>) -> Result<Self> {
        if components.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("algebra element".into()));
        }
        Ok(AlgebraElement(components))
    }

    pub fn components(&self) -> &[f64] {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentumValue(Vec<f64>);

impl MomentumValue {
    pub fn new(components: Vec<f64>) -> Self {
        MomentumValue(components)
    }

    pub fn components(&self) -> &[f64] {
        &self.0
    }

    pub fn distance(&self, other: &MomentumValue) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

pub fn hat(v: &[f64]) -> Matrix3<f64> {
    Matrix3::new(0.0, -v[2], v[1], v[2], 0.0, -v[0], -v[1], v[0], 0.0)
}

fn cross(a: &[f64], b: &[f64]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn rotate(o: &Matrix3<f64>, v: &[f64]) -> [f64; 3] {
    let r = o * Vector3::new(v[0], v[1], v[2]);
    [r[0], r[1], r[2]]
}

/// An action family bound to a chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupAction {
    family: ActionFamily,
    chart: Chart,
}

impl GroupAction {
    pub fn new(family: ActionFamily, chart: Chart) -> Result<Self> {
        let mismatch = |expected: &str| {
            Err(Error::ChartMismatch {
                expected: format!("{expected} for {}", family.name()),
                found: chart.to_string(),
            })
        };
        match family {
            ActionFamily::LiftedTranslation { k } | ActionFamily::ContactTranslation { k } => {
                let kind = match family {
                    ActionFamily::LiftedTranslation { .. } => ChartKind::Symplectic,
                    _ => ChartKind::Contact,
                };
                if chart.kind() != kind {
                    return mismatch(&format!("{kind} chart"));
                }
                if k == 0 || k > chart.n() {
                    return Err(Error::Invalid(format!(
                        "translation family needs 1 <= k <= n = {}, got k = {k}",
                        chart.n()
                    )));
                }
            }
            ActionFamily::LiftedRotationSo3 => {
                if chart.kind() != ChartKind::Symplectic || chart.n() != 3 {
                    return mismatch("symplectic chart with n = 3");
                }
            }
        }
        Ok(GroupAction { family, chart })
    }

    pub fn family(&self) -> ActionFamily {
        self.family
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn algebra_dim(&self) -> usize {
        match self.family {
            ActionFamily::LiftedTranslation { k } | ActionFamily::ContactTranslation { k } => k,
            ActionFamily::LiftedRotationSo3 => 3,
        }
    }

    pub fn identity(&self) -> GroupElement {
        match self.family {
            ActionFamily::LiftedRotationSo3 => GroupElement::Rotation(Matrix3::identity()),
            _ => GroupElement::Translation(vec![0.0; self.algebra_dim()]),
        }
    }

    pub fn basis(&self, i: usize) -> AlgebraElement {
        AlgebraElement(linalg::unit(self.algebra_dim(), i))
    }

    fn check_point(&self, pt: &Point) -> Result<()> {
        if pt.chart() != self.chart {
            return Err(Error::ChartMismatch {
                expected: self.chart.to_string(),
                found: pt.chart().to_string(),
            });
        }
        Ok(())
    }

    fn check_element(&self, g: &GroupElement) -> Result<()> {
        match (self.family, g) {
            (ActionFamily::LiftedRotationSo3, GroupElement::Rotation(_)) => Ok(()),
            (ActionFamily::LiftedRotationSo3, _) => Err(Error::Invalid("SO(3) action needs a rotation".into())),
            (_, GroupElement::Translation(a)) if a.len() == self.algebra_dim() => Ok(()),
            (_, GroupElement::Translation(a)) => Err(Error::Dimension {
                what: "translation vector",
                expected: self.algebra_dim(),
                found: a.len(),
            }),
            _ => Err(Error::Invalid("translation action needs a translation vector".into())),
        }
    }

    fn check_algebra(&self, xi: &AlgebraElement) -> Result<()> {
        if xi.0.len() != self.algebra_dim() {
            return Err(Error::Dimension {
                what: "algebra element",
                expected: self.algebra_dim(),
                found: xi.0.len(),
            });
        }
        Ok(())
    }

    pub(crate) fn act_raw(&self, g: &GroupElement, x: &[f64]) -> Vec<f64> {
        let mut y = x.to_vec();
        match g {
            GroupElement::Translation(a) => {
                y.iter_mut().zip(a).for_each(|(q, s)| *q += s);
            }
            GroupElement::Rotation(o) => {
                y[..3].copy_from_slice(&rotate(o, &x[..3]));
                y[3..6].copy_from_slice(&rotate(o, &x[3..6]));
            }
        }
        y
    }

    /// `Φ_g(x)`.
    pub fn act(&self, g: &GroupElement, pt: &Point) -> Result<Point> {
        self.check_point(pt)?;
        self.check_element(g)?;
        Point::new(self.chart, self.act_raw(g, pt.coords()))
    }

    /// `exp(tξ)`; Rodrigues' formula for rotations.
    pub fn exp(&self, xi: &AlgebraElement, t: f64) -> Result<GroupElement> {
        self.check_algebra(xi)?;
        let w: Vec<f64> = xi.0.iter().map(|c| c * t).collect();
        Ok(match self.family {
            ActionFamily::LiftedRotationSo3 => {
                let theta = linalg::norm(&w);
                let k = hat(&w);
                let (a, b) = if theta < 1e-8 {
                    (1.0 - theta * theta / 6.0, 0.5 - theta * theta / 24.0)
                } else {
                    (theta.sin() / theta, (1.0 - theta.cos()) / (theta * theta))
                };
                GroupElement::Rotation(Matrix3::identity() + k * a + k * k * b)
            }
            _ => GroupElement::Translation(w),
        })
    }

    /// Group product `g·h` (act by `h` first).
    pub fn compose(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        self.check_element(g)?;
        self.check_element(h)?;
        Ok(match (g, h) {
            (GroupElement::Translation(a), GroupElement::Translation(b)) => {
                GroupElement::Translation(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (GroupElement::Rotation(a), GroupElement::Rotation(b)) => GroupElement::Rotation(a * b),
            _ => unreachable!("elements checked against the family"),
        })
    }

    pub(crate) fn generator_raw(&self, xi: &[f64], x: &[f64]) -> Vec<f64> {
        let mut v = vec![0.0; self.chart.dim()];
        match self.family {
            ActionFamily::LiftedTranslation { .. } | ActionFamily::ContactTranslation { .. } => {
                v[..xi.len()].copy_from_slice(xi);
            }
            ActionFamily::LiftedRotationSo3 => {
                v[..3].copy_from_slice(&cross(xi, &x[..3]));
                v[3..6].copy_from_slice(&cross(xi, &x[3..6]));
            }
        }
        v
    }

    /// Infinitesimal generator `ξ_M(x) = d/dt|₀ Φ(exp(tξ), x)`.
    pub fn generator(&self, xi: &AlgebraElement, pt: &Point) -> Result<TangentVector> {
        self.check_point(pt)?;
        self.check_algebra(xi)?;
        TangentVector::new(pt, self.generator_raw(&xi.0, pt.coords()))
    }

    pub(crate) fn momentum_raw(&self, x: &[f64]) -> Vec<f64> {
        let n = self.chart.n();
        match self.family {
            // J(x)ξ = α(ξ_M) for cotangent lifts, −η(ξ_M) for contact
            // translations; both reduce to p_{1..k}.
            ActionFamily::LiftedTranslation { k } | ActionFamily::ContactTranslation { k } => x[n..n + k].to_vec(),
            ActionFamily::LiftedRotationSo3 => cross(&x[..3], &x[3..6]).to_vec(),
        }
    }

    /// Momentum map `J(x)` in the dot-product identification of `𝔤*`.
    pub fn momentum(&self, pt: &Point) -> Result<MomentumValue> {
        self.check_point(pt)?;
        Ok(MomentumValue(self.momentum_raw(pt.coords())))
    }

    /// `Ad*_{g⁻¹} μ`: the identity for abelian families, `Oμ` for rotations.
    pub fn coadjoint(&self, g: &GroupElement, mu: &MomentumValue) -> Result<MomentumValue> {
        self.check_element(g)?;
        Ok(match g {
            GroupElement::Rotation(o) => MomentumValue(rotate(o, &mu.0).to_vec()),
            GroupElement::Translation(_) => mu.clone(),
        })
    }

    /// `TΦ_g · v`, exact for these affine actions.
    pub fn pushforward(&self, g: &GroupElement, v: &TangentVector) -> Result<TangentVector> {
        self.check_point(v.base())?;
        self.check_element(g)?;
        let image = self.act(g, v.base())?;
        let comps = match g {
            GroupElement::Translation(_) => v.components().to_vec(),
            GroupElement::Rotation(o) => {
                let c = v.components();
                let mut w = rotate(o, &c[..3]).to_vec();
                w.extend(rotate(o, &c[3..6]));
                w
            }
        };
        TangentVector::new(&image, comps)
    }

    /// Random group element: translations uniform in `[−radius, radius]ᵏ`,
    /// rotations uniform on `SO(3)` via unit quaternions.
    pub fn sample_element<R: Rng + ?Sized>(&self, rng: &mut R, radius: f64) -> GroupElement {
        match self.family {
            ActionFamily::LiftedRotationSo3 => {
                let q = sampling::unit_vec(rng, 4);
                let (w, x, y, z) = (q[0], q[1], q[2], q[3]);
                GroupElement::Rotation(Matrix3::new(
                    1.0 - 2.0 * (y * y + z * z),
                    2.0 * (x * y - w * z),
                    2.0 * (x * z + w * y),
                    2.0 * (x * y + w * z),
                    1.0 - 2.0 * (x * x + z * z),
                    2.0 * (y * z - w * x),
                    2.0 * (x * z - w * y),
                    2.0 * (y * z + w * x),
                    1.0 - 2.0 * (x * x + y * y),
                ))
            }
            _ => GroupElement::Translation(sampling::uniform_vec(rng, self.algebra_dim(), radius)),
        }
    }
}

/// Momentum condition at `pt` for one algebra element, normalized by `|ξ|`.
///
/// Symplectic: `|dĴ(ξ) − i_{ξ_M}ω|`. Contact: the larger of
/// `|dĴ(ξ) − i_{ξ_M}dη|` and `|X_{Ĵ(ξ)} − ξ_M|`. `dĴ` is taken by central
/// differences of the momentum map.
pub fn momentum_condition_residual(action: &GroupAction, xi: &AlgebraElement, pt: &Point) -> Result<f64> {
    action.check_point(pt)?;
    action.check_algebra(xi)?;
    let scale = linalg::norm(&xi.0);
    if scale == 0.0 {
        return Ok(0.0);
    }
    let x = pt.coords();
    let n = action.chart.n();
    let jhat = |y: &[f64]| linalg::dot(&action.momentum_raw(y), &xi.0);
    let dj = numeric_gradient(&jhat, x);
    let gen = action.generator(xi, pt)?;
    let g = gen.components();
    let residual = match action.chart.kind() {
        ChartKind::Symplectic => {
            let flat = flat_symplectic(pt, &gen)?;
            linalg::max_abs(&sub(&dj, flat.components()))
        }
        _ => {
            // i_v dη with dη = dqⁱ ∧ dpᵢ
            let mut i_deta = vec![0.0; action.chart.dim()];
            for i in 0..n {
                i_deta[i] = -g[n + i];
                i_deta[n + i] = g[i];
            }
            let xj = xh_contact_raw(n, x, jhat(x), &dj);
            linalg::max_abs(&sub(&dj, &i_deta)).max(linalg::max_abs(&sub(&xj, g)))
        }
    };
    Ok(residual / scale)
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Maximum of [`momentum_condition_residual`] over the algebra basis.
pub fn check_momentum_condition(action: &GroupAction, pt: &Point) -> Result<f64> {
    (0..action.algebra_dim()).try_fold(0.0f64, |acc, i| {
        Ok(acc.max(momentum_condition_residual(action, &action.basis(i), pt)?))
    })
}

/// `|J(Φ_g x) − Ad*_{g⁻¹} J(x)|`.
pub fn check_equivariance(action: &GroupAction, g: &GroupElement, pt: &Point) -> Result<f64> {
    let lhs = action.momentum(&action.act(g, pt)?)?;
    let rhs = action.coadjoint(g, &action.momentum(pt)?)?;
    Ok(lhs.distance(&rhs))
}

/// Largest relative invariance defect `|H(g·x) − H(x)| / max(1, |H(x)|)`
/// over `samples` random group elements at each of `points`.
pub fn invariance_residual<R: Rng + ?Sized>(
    action: &GroupAction,
    h: &ScalarField,
    points: &[Point],
    rng: &mut R,
    samples: usize,
) -> Result<f64> {
    let mut worst = 0.0f64;
    for pt in points {
        let h0 = h.value(pt)?;
        for _ in 0..samples {
            let g = action.sample_element(rng, 3.0);
            let h1 = h.value(&action.act(&g, pt)?)?;
            worst = worst.max((h1 - h0).abs() / h0.abs().max(1.0));
        }
    }
    Ok(worst)
}

/// Fails with [`Error::NotInvariant`] unless `H` passes the sampled
/// invariance test at `points`.
pub fn require_invariant(action: &GroupAction, h: &ScalarField, points: &[Point], seed: u64) -> Result<()> {
    let defect = invariance_residual(action, h, points, &mut sampling::rng(seed), 8)?;
    if defect < INVARIANCE_TOL {
        Ok(())
    } else {
        Err(Error::NotInvariant(defect))
    }
}

/// Records the momentum components under `J1, J2, …`.
pub fn attach_momentum(traj: &mut Trajectory, action: &GroupAction) -> Result<()> {
    for i in 0..action.algebra_dim() {
        traj.add_observable(&format!("J{}", i + 1), |pt| Ok(action.momentum(pt)?.0[i]))?;
    }
    Ok(())
}

/// Momentum transport along a flow of an invariant `H`.
///
/// Symplectic charts: `|J(t) − J(0)|` per sample. Contact charts:
/// `|Ĵ(t) − Ĵ(0) exp(−∫𝓡(H) dt)|`, the rescaling that follows from
/// `𝓛_{X_H} Ĵ = −𝓡(H) Ĵ` for invariant `H`.
pub fn momentum_dissipation_check(
    action: &GroupAction,
    h: &ScalarField,
    traj: &Trajectory,
    seed: u64,
) -> Result<Vec<f64>> {
    if traj.is_empty() {
        return Ok(Vec::new());
    }
    let points: Vec<Point> = (0..traj.len()).map(|i| traj.point(i)).collect();
    let probe: Vec<Point> = points.iter().step_by((points.len() / 16).max(1)).cloned().collect();
    require_invariant(action, h, &probe, seed)?;
    let scale: Vec<f64> = match action.chart.kind() {
        ChartKind::Contact => {
            let rh = points
                .iter()
                .map(|p| hamiltonian::reeb_derivative(h, p))
                .collect::<Result<Vec<_>>>()?;
            cumulative_trapezoid(traj.times(), &rh)
                .into_iter()
                .map(|s| (-s).exp())
                .collect()
        }
        _ => vec![1.0; points.len()],
    };
    let j0 = action.momentum(&points[0])?;
    points
        .iter()
        .zip(scale)
        .map(|(p, s)| {
            let j = action.momentum(p)?;
            Ok(j.0
                .iter()
                .zip(&j0.0)
                .map(|(a, b)| (a - b * s).abs())
                .fold(0.0, f64::max))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::eta;
    use crate::sampling::{point, rng, vector};
    use std::f64::consts::FRAC_PI_2;

    fn so3() -> GroupAction {
        GroupAction::new(ActionFamily::LiftedRotationSo3, Chart::symplectic(3).unwrap()).unwrap()
    }

    fn contact(n: usize, k: usize) -> GroupAction {
        GroupAction::new(ActionFamily::ContactTranslation { k }, Chart::contact(n).unwrap()).unwrap()
    }

    #[test]
    fn family_chart_validation() {
        assert!(GroupAction::new(ActionFamily::LiftedRotationSo3, Chart::symplectic(2).unwrap()).is_err());
        assert!(GroupAction::new(ActionFamily::LiftedTranslation { k: 3 }, Chart::symplectic(2).unwrap()).is_err());
        assert!(GroupAction::new(ActionFamily::ContactTranslation { k: 1 }, Chart::symplectic(2).unwrap()).is_err());
    }

    #[test]
    fn identity_acts_trivially() {
        let mut r = rng(3);
        for action in [so3(), contact(2, 2)] {
            let pt = point(&mut r, action.chart(), 2.0);
            assert_eq!(action.act(&action.identity(), &pt).unwrap(), pt);
        }
    }

    #[test]
    fn rodrigues_quarter_turn() {
        let g = so3().exp(&AlgebraElement::new(vec![0.0, 0.0, 1.0]).unwrap(), FRAC_PI_2).unwrap();
        let GroupElement::Rotation(o) = g else { panic!() };
        let expected = Matrix3::new(0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0);
        assert!((o - expected).norm() < 1e-15);
        assert_eq!(so3().exp(&AlgebraElement::new(vec![1.0, 2.0, 3.0]).unwrap(), 0.0).unwrap(), so3().identity());
    }

    #[test]
    fn one_parameter_subgroup() {
        let a = so3();
        let xi = AlgebraElement::new(vec![0.3, -1.2, 0.5]).unwrap();
        let gs = a.exp(&xi, 0.7).unwrap();
        let gt = a.exp(&xi, 1.9).unwrap();
        let (GroupElement::Rotation(p), GroupElement::Rotation(q)) = (a.compose(&gs, &gt).unwrap(), a.exp(&xi, 2.6).unwrap())
        else {
            panic!()
        };
        assert!((p - q).norm() < 1e-12);
    }

    #[test]
    fn rotation_validation() {
        assert!(GroupElement::rotation(Matrix3::identity() * 2.0).is_err());
        assert!(GroupElement::rotation(-Matrix3::identity()).is_err());
        assert!(GroupElement::rotation(Matrix3::identity()).is_ok());
    }

    #[test]
    fn so3_generator_on_x_axis() {
        let a = so3();
        let pt = Point::new(a.chart(), vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        let v = a.generator(&AlgebraElement::new(vec![0.0, 0.0, 1.0]).unwrap(), &pt).unwrap();
        assert_eq!(&v.components()[..3], &[0.0, 1.0, 0.0]);
    }

    #[test]
    fn momentum_examples() {
        let tr = GroupAction::new(ActionFamily::LiftedTranslation { k: 2 }, Chart::symplectic(2).unwrap()).unwrap();
        let pt = Point::new(tr.chart(), vec![5.0, -7.0, 3.0, -1.0]).unwrap();
        assert_eq!(tr.momentum(&pt).unwrap().components(), &[3.0, -1.0]);
        let pt = Point::new(so3().chart(), vec![1.0, 0.0, 0.0, 0.0, 1.0, 0.0]).unwrap();
        assert_eq!(so3().momentum(&pt).unwrap().components(), &[0.0, 0.0, 1.0]);
        let c = contact(2, 2);
        let pt = Point::new(c.chart(), vec![1.0, 2.0, 0.0, 0.0, 4.0]).unwrap();
        assert_eq!(c.momentum(&pt).unwrap().components(), &[0.0, 0.0]);
    }

    #[test]
    fn contact_momentum_is_minus_eta_of_generator() {
        let c = contact(3, 2);
        let mut r = rng(11);
        for _ in 0..20 {
            let pt = point(&mut r, c.chart(), 2.0);
            for i in 0..2 {
                let gen = c.generator(&c.basis(i), &pt).unwrap();
                assert_eq!(-eta(&pt, &gen).unwrap(), c.momentum(&pt).unwrap().components()[i]);
            }
        }
    }

    #[test]
    fn translation_pushforward_preserves_eta() {
        let c = contact(2, 2);
        let mut r = rng(5);
        for _ in 0..50 {
            let pt = point(&mut r, c.chart(), 2.0);
            let v = vector(&mut r, &pt);
            let g = c.sample_element(&mut r, 3.0);
            let w = c.pushforward(&g, &v).unwrap();
            assert!((eta(w.base(), &w).unwrap() - eta(&pt, &v).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn momentum_condition_scale_invariant() {
        let a = so3();
        let pt = point(&mut rng(2), a.chart(), 1.5);
        let xi = AlgebraElement::new(vec![0.2, -0.4, 0.9]).unwrap();
        let big = AlgebraElement::new(vec![2.0, -4.0, 9.0]).unwrap();
        let r1 = momentum_condition_residual(&a, &xi, &pt).unwrap();
        let r2 = momentum_condition_residual(&a, &big, &pt).unwrap();
        assert!(r1 < 1e-6 && r2 < 1e-6);
    }

    #[test]
    fn equivariance_at_identity_is_exact() {
        let a = so3();
        let pt = point(&mut rng(9), a.chart(), 1.0);
        assert_eq!(check_equivariance(&a, &a.identity(), &pt).unwrap(), 0.0);
    }

    #[test]
    fn non_invariant_hamiltonian_rejected() {
        let c = contact(1, 1);
        let h = ScalarField::coordinate(c.chart(), 0).unwrap();
        let pts = vec![Point::origin(c.chart())];
        assert!(matches!(require_invariant(&c, &h, &pts, 1), Err(Error::NotInvariant(_))));
    }
}
