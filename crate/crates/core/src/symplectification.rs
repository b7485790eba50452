//! The symplectification `(M × ℝ, Ω)` of a contact chart, with
//! `α = −eᵗ η` and `Ω = −dα = eᵗ (dη + dt ∧ η)`.
//!
//! Contact actions lift as `Φ̃_g(x, t) = (Φ_g x, t)` with momentum
//! `J̃(x, t) = eᵗ J(x)`. The zero level therefore satisfies
//! `J̃⁻¹(0) = J⁻¹(0) × ℝ`, which is what makes reduction and
//! symplectification commute there; any other level is rescaled along `t`.

use nalgebra::DMatrix;
use rand::Rng;
use serde::Serialize;

use crate::geometry::{
    classify_point, complement_lambda, complement_omega, eta_raw, lifted_omega_raw, two_form_matrix, ChartKind,
    Point, PointPosition, SubspaceBasis, TangentVector,
};
use crate::hamiltonian::TranslationInvariant;
use crate::reduction::reduce_contact_translation;
use crate::symmetry::{ActionFamily, GroupAction, GroupElement, MomentumValue};
use crate::{linalg, sampling, Chart, Error, Result};

/// Finite-difference step for the exterior derivative of `Ω`.
pub const CLOSEDNESS_STEP: f64 = 1e-5;

/// Symplectified chart over a contact chart.
pub fn symplectified_chart(base: Chart) -> Result<Chart> {
    base.expect(ChartKind::Contact)?;
    Chart::symplectified(base.n())
}

/// `(x, t) ↦ x`.
pub fn base_point(pt: &Point) -> Result<Point> {
    pt.chart().expect(ChartKind::Symplectified)?;
    let base = pt.chart().base().expect("symplectified charts have a base");
    Point::new(base, pt.coords()[..base.dim()].to_vec())
}

/// `x ↦ (x, t)`.
pub fn lift_point(x: &Point, t: f64) -> Result<Point> {
    let chart = symplectified_chart(x.chart())?;
    let mut c = x.coords().to_vec();
    c.push(t);
    Point::new(chart, c)
}

fn check_vector(pt: &Point, v: &TangentVector) -> Result<()> {
    pt.chart().expect(ChartKind::Symplectified)?;
    if v.base().chart() != pt.chart() {
        return Err(Error::ChartMismatch {
            expected: pt.chart().to_string(),
            found: v.base().chart().to_string(),
        });
    }
    Ok(())
}

/// `α(v) = −eᵗ η(v_b)`.
pub fn alpha(pt: &Point, v: &TangentVector) -> Result<f64> {
    check_vector(pt, v)?;
    let n = pt.chart().n();
    let x = pt.coords();
    Ok(-x[2 * n + 1].exp() * eta_raw(n, x, v.components()))
}

/// `Ω(u, v) = eᵗ [dη(u_b, v_b) + u_t η(v_b) − v_t η(u_b)]`.
pub fn omega_lifted(pt: &Point, u: &TangentVector, v: &TangentVector) -> Result<f64> {
    check_vector(pt, u)?;
    check_vector(pt, v)?;
    Ok(lifted_omega_raw(pt.chart().n(), pt.coords(), u.components(), v.components()))
}

/// Gram matrix `Ω(eᵢ, eⱼ)`.
pub fn omega_matrix(pt: &Point) -> Result<DMatrix<f64>> {
    pt.chart().expect(ChartKind::Symplectified)?;
    Ok(two_form_matrix(pt))
}

/// `det Ω(eᵢ, eⱼ)`; equals `e^{2(n+1)t}` in Darboux coordinates.
pub fn omega_determinant(pt: &Point) -> Result<f64> {
    Ok(omega_matrix(pt)?.determinant())
}

/// Largest entry of `dΩ`, `(dΩ)_{ijk} = ∂ᵢΩ_{jk} + ∂ⱼΩ_{ki} + ∂ₖΩ_{ij}`,
/// with central differences of step [`CLOSEDNESS_STEP`].
pub fn closedness_residual(pt: &Point) -> Result<f64> {
    pt.chart().expect(ChartKind::Symplectified)?;
    let dim = pt.chart().dim();
    let derivs: Vec<DMatrix<f64>> = (0..dim)
        .map(|i| {
            let mut plus = pt.coords().to_vec();
            let mut minus = pt.coords().to_vec();
            plus[i] += CLOSEDNESS_STEP;
            minus[i] -= CLOSEDNESS_STEP;
            let mp = two_form_matrix(&Point::new(pt.chart(), plus)?);
            let mm = two_form_matrix(&Point::new(pt.chart(), minus)?);
            Ok((mp - mm) / (2.0 * CLOSEDNESS_STEP))
        })
        .collect::<Result<_>>()?;
    let mut worst = 0.0f64;
    for i in 0..dim {
        for j in 0..dim {
            for k in 0..dim {
                let d = derivs[i][(j, k)] + derivs[j][(k, i)] + derivs[k][(i, j)];
                worst = worst.max(d.abs());
            }
        }
    }
    Ok(worst)
}

/// `T_{(x,t)}(N × ℝ) = T_xN ⊕ ⟨∂_t⟩` for each sampled `T_xN`.
pub fn lift_submanifold(samples: &[SubspaceBasis], t: f64) -> Result<Vec<SubspaceBasis>> {
    samples
        .iter()
        .map(|b| {
            let pt = lift_point(b.base(), t)?;
            let dim = pt.chart().dim();
            let mut vectors: Vec<Vec<f64>> = b
                .vectors()
                .iter()
                .map(|v| {
                    let mut w = v.clone();
                    w.push(0.0);
                    w
                })
                .collect();
            vectors.push(linalg::unit(dim, dim - 1));
            SubspaceBasis::new(&pt, vectors)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LiftedComplementReport {
    /// Subspace-equality residual between `(T(N×ℝ))^⊥` and
    /// `(TN)^{⊥_Λ} × {0}`.
    pub equality_residual: f64,
    /// Largest `|t|`-component of an orthonormal basis of `(T(N×ℝ))^⊥`.
    pub max_t_component: f64,
    /// Largest `|η(v_b)|` over that basis.
    pub max_eta: f64,
}

/// Compares the `Ω`-complement of each lifted tangent space with the
/// `Λ`-complement of the base one. Horizontal points are rejected.
pub fn lifted_complement_check(samples: &[SubspaceBasis], t: f64) -> Result<LiftedComplementReport> {
    let mut report = LiftedComplementReport {
        equality_residual: 0.0,
        max_t_component: 0.0,
        max_eta: 0.0,
    };
    for (b, lifted) in samples.iter().zip(lift_submanifold(samples, t)?) {
        if classify_point(b)? == PointPosition::Horizontal {
            return Err(Error::Domain(
                "the lifted complement identity needs a submanifold without horizontal points".into(),
            ));
        }
        let complement = complement_omega(&lifted)?;
        let base_complement = complement_lambda(b)?;
        let padded: Vec<Vec<f64>> = base_complement
            .vectors()
            .iter()
            .map(|v| {
                let mut w = v.clone();
                w.push(0.0);
                w
            })
            .collect();
        let padded = SubspaceBasis::spanned_by(lifted.base(), &padded)?;
        let n = b.chart().n();
        report.equality_residual = report.equality_residual.max(complement.equality_residual(&padded));
        for v in complement.vectors() {
            report.max_t_component = report.max_t_component.max(v[2 * n + 1].abs());
            report.max_eta = report.max_eta.max(eta_raw(n, lifted.base().coords(), v).abs());
        }
    }
    Ok(report)
}

fn check_contact_action(action: &GroupAction, pt: &Point) -> Result<()> {
    if !matches!(action.family(), ActionFamily::ContactTranslation { .. }) {
        return Err(Error::Invalid(format!(
            "symplectified actions lift contact actions, got {}",
            action.family().name()
        )));
    }
    if pt.chart() != symplectified_chart(action.chart())? {
        return Err(Error::ChartMismatch {
            expected: symplectified_chart(action.chart())?.to_string(),
            found: pt.chart().to_string(),
        });
    }
    Ok(())
}

/// `J̃(x, t) = eᵗ J(x)`.
pub fn lifted_momentum(action: &GroupAction, pt: &Point) -> Result<MomentumValue> {
    check_contact_action(action, pt)?;
    let scale = pt.t().expect("symplectified point").exp();
    let j = action.momentum(&base_point(pt)?)?;
    Ok(MomentumValue::new(j.components().iter().map(|c| scale * c).collect()))
}

/// `J̃(x, t)ξ = α(ξ_{M×ℝ})` with `ξ_{M×ℝ} = (ξ_M, 0)`, evaluated directly
/// from the lifted generator.
pub fn lifted_momentum_direct(action: &GroupAction, pt: &Point) -> Result<MomentumValue> {
    check_contact_action(action, pt)?;
    let x = base_point(pt)?;
    let comps = (0..action.algebra_dim())
        .map(|i| {
            let mut g = action.generator(&action.basis(i), &x)?.into_components();
            g.push(0.0);
            alpha(pt, &TangentVector::new(pt, g)?)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MomentumValue::new(comps))
}

/// `Φ̃_g(x, t) = (Φ_g x, t)`.
pub fn lifted_act(action: &GroupAction, g: &GroupElement, pt: &Point) -> Result<Point> {
    check_contact_action(action, pt)?;
    lift_point(&action.act(g, &base_point(pt)?)?, pt.t().expect("symplectified point"))
}

/// `TΦ̃_g (v_b, v_t) = (TΦ_g v_b, v_t)`.
pub fn lifted_pushforward(action: &GroupAction, g: &GroupElement, v: &TangentVector) -> Result<TangentVector> {
    let pt = v.base();
    check_contact_action(action, pt)?;
    let base = base_point(pt)?;
    let c = v.components();
    let vb = TangentVector::new(&base, c[..c.len() - 1].to_vec())?;
    let mut w = action.pushforward(g, &vb)?.into_components();
    w.push(c[c.len() - 1]);
    TangentVector::new(&lifted_act(action, g, pt)?, w)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InvarianceReport {
    /// `max |α(Φ̃_g·)(Φ̃_* v) − α(v)|`.
    pub alpha: f64,
    /// `max |Ω(Φ̃_* u, Φ̃_* v) − Ω(u, v)|`.
    pub omega: f64,
}

/// Invariance of `α` and `Ω` under `Φ̃_g` at `pt`, over `samples` random
/// tangent vectors (pairs for `Ω`).
pub fn lifted_action_invariance_check<R: Rng + ?Sized>(
    action: &GroupAction,
    g: &GroupElement,
    pt: &Point,
    rng: &mut R,
    samples: usize,
) -> Result<InvarianceReport> {
    let image = lifted_act(action, g, pt)?;
    let mut rep = InvarianceReport { alpha: 0.0, omega: 0.0 };
    for _ in 0..samples {
        let u = sampling::vector(rng, pt);
        let v = sampling::vector(rng, pt);
        let (gu, gv) = (lifted_pushforward(action, g, &u)?, lifted_pushforward(action, g, &v)?);
        rep.alpha = rep.alpha.max((alpha(&image, &gu)? - alpha(pt, &u)?).abs());
        rep.omega = rep
            .omega
            .max((omega_lifted(&image, &gu, &gv)? - omega_lifted(pt, &u, &v)?).abs());
    }
    Ok(rep)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CommutativityReport {
    pub n: usize,
    pub k: usize,
    pub samples: usize,
    /// `max |Ω̄(H_*u, H_*v) − Ω̃(u, v)|`.
    pub max_residual: f64,
    /// `max |Ω̃(u, v) − Ω̃(u', v')|` over two representatives of the same
    /// quotient vectors, lifted through sections offset along the orbit.
    pub well_defined_residual: f64,
}

/// Compares the two symplectic forms on the symplectified reduced space
/// of the contact-translation family at `μ = 0`.
///
/// Path A symplectifies the reduced contact chart and evaluates `Ω̄`
/// there. Path B realizes `J̃⁻¹(0) = {p₁..p_k = 0} × ℝ`, lifts quotient
/// vectors to representatives through the section (with arbitrary
/// components along the orbit) and evaluates `Ω` of the full
/// symplectified chart. In these coordinates the comparison map
/// `[x, t] ↦ ([x], t)` is the identity.
pub fn commutativity_check(n: usize, k: usize, mu: &[f64], seed: u64, samples: usize) -> Result<CommutativityReport> {
    if mu.iter().any(|m| *m != 0.0) {
        return Err(Error::NonzeroLiftedLevel(mu.to_vec()));
    }
    if mu.len() != k && !mu.is_empty() {
        return Err(Error::Dimension {
            what: "momentum level",
            expected: k,
            found: mu.len(),
        });
    }
    let base = Chart::contact(n)?;
    let free = TranslationInvariant {
        mass: 1.0,
        drift: Vec::new(),
        gamma: 0.0,
    }
    .field(base)?;
    let reduced = reduce_contact_translation(&free, k, &vec![0.0; k])?;
    let action = *reduced.action();
    let small = symplectified_chart(reduced.reduced_chart())?;
    let mut rng = sampling::rng(seed);
    let mut report = CommutativityReport {
        n,
        k,
        samples,
        max_residual: 0.0,
        well_defined_residual: 0.0,
    };
    for _ in 0..samples {
        let ybar = sampling::point(&mut rng, small, 2.0);
        let u = sampling::vector(&mut rng, &ybar);
        let v = sampling::vector(&mut rng, &ybar);
        let path_a = omega_lifted(&ybar, &u, &v)?;

        let path_b = |rng: &mut rand_chacha::ChaCha8Rng| -> Result<f64> {
            let g = action.sample_element(rng, 5.0);
            let y = base_point(&ybar)?;
            let t = ybar.t().expect("symplectified point");
            let x = lift_point(&action.act(&g, &reduced.section(&y)?)?, t)?;
            let lift = |w: &TangentVector, rng: &mut rand_chacha::ChaCha8Rng| -> Result<TangentVector> {
                let c = w.components();
                let wb = TangentVector::new(&y, c[..c.len() - 1].to_vec())?;
                let mut full = reduced.section_tangent(&wb)?.into_components();
                for (slot, along) in full.iter_mut().zip(sampling::uniform_vec(rng, k, 3.0)) {
                    *slot += along;
                }
                full.push(c[c.len() - 1]);
                TangentVector::new(&x, full)
            };
            let (lu, lv) = (lift(&u, rng)?, lift(&v, rng)?);
            omega_lifted(&x, &lu, &lv)
        };
        let b1 = path_b(&mut rng)?;
        let b2 = path_b(&mut rng)?;
        report.max_residual = report.max_residual.max((path_a - b1).abs());
        report.well_defined_residual = report.well_defined_residual.max((b1 - b2).abs());
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MuProbe {
    pub t: f64,
    pub base_momentum: Vec<f64>,
    pub lifted_momentum: Vec<f64>,
    /// `|J̃(x, t) − μ|`: nonzero means `(x, t) ∉ J̃⁻¹(μ)` although `x ∈ J⁻¹(μ)`.
    pub level_defect: f64,
    pub product_structure_fails: bool,
}

/// Shows that `J⁻¹(μ) × ℝ ≠ J̃⁻¹(μ)` for `μ ≠ 0`: a point of `J⁻¹(μ)` lifted
/// to height `t ≠ 0` has lifted momentum `eᵗ μ`.
pub fn mu_nonzero_probe(n: usize, k: usize, mu: &[f64], t: f64, seed: u64) -> Result<MuProbe> {
    let base = Chart::contact(n)?;
    let action = GroupAction::new(ActionFamily::ContactTranslation { k }, base)?;
    if mu.len() != k {
        return Err(Error::Dimension {
            what: "momentum level",
            expected: k,
            found: mu.len(),
        });
    }
    let mut rng = sampling::rng(seed);
    let mut coords = sampling::uniform_vec(&mut rng, base.dim(), 2.0);
    coords[n..n + k].copy_from_slice(mu);
    let x = Point::new(base, coords)?;
    let lifted = lift_point(&x, t)?;
    let j = action.momentum(&x)?;
    let jt = lifted_momentum(&action, &lifted)?;
    let level_defect = jt.distance(&MomentumValue::new(mu.to_vec()));
    Ok(MuProbe {
        t,
        base_momentum: j.components().to_vec(),
        lifted_momentum: jt.components().to_vec(),
        level_defect,
        product_structure_fails: level_defect > 1e-12,
    })
}
