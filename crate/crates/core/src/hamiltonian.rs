//! Hamiltonian functions and their vector fields.
//!
//! A [`ScalarField`] is a pure evaluator on one chart with an optional
//! analytic gradient. Fields combine by `+` and scalar `*`, so the damped
//! Hamiltonian `H_cm + γz` is literally a mechanical field plus a multiple
//! of the `z` coordinate.

use std::fmt;
use std::ops::{Add, Mul, Neg};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::geometry::{ChartKind, Covector, Point, TangentVector};
use crate::{Chart, Error, Result};

type EvalFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type GradFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// Step used by [`divergence_contact`] for the Jacobian of `X_H`.
pub const DIVERGENCE_STEP: f64 = 1e-5;

#[derive(Clone)]
pub struct ScalarField {
    chart: Chart,
    name: String,
    eval: EvalFn,
    grad: Option<GradFn>,
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarField")
            .field("chart", &self.chart)
            .field("name", &self.name)
            .field("analytic_gradient", &self.grad.is_some())
            .finish()
    }
}

impl ScalarField {
    pub fn new<F>(chart: Chart, name: impl Into<String>, eval: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        ScalarField {
            chart,
            name: name.into(),
            eval: Arc::new(eval),
            grad: None,
        }
    }

    /// Attaches an analytic gradient (components in chart layout).
    pub fn with_gradient<G>(mut self, grad: G) -> Self
    where
        G: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        self.grad = Some(Arc::new(grad));
        self
    }

    pub fn constant(chart: Chart, c: f64) -> Self {
        let dim = chart.dim();
        ScalarField::new(chart, format!("{c}"), move |_| c).with_gradient(move |_| vec![0.0; dim])
    }

    /// The coordinate function `x ↦ x^i`.
    pub fn coordinate(chart: Chart, i: usize) -> Result<Self> {
        let dim = chart.dim();
        if i >= dim {
            return Err(Error::Invalid(format!("coordinate {i} out of range for dim {dim}")));
        }
        let name = chart.coordinate_names()[i].clone();
        Ok(ScalarField::new(chart, name, move |x| x[i]).with_gradient(move |_| {
            let mut g = vec![0.0; dim];
            g[i] = 1.0;
            g
        }))
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn has_analytic_gradient(&self) -> bool {
        self.grad.is_some()
    }

    /// Raw evaluation on a coordinate slice; no chart checks.
    pub fn eval_raw(&self, x: &[f64]) -> f64 {
        (self.eval)(x)
    }

    pub fn value(&self, pt: &Point) -> Result<f64> {
        self.check_chart(pt)?;
        let v = (self.eval)(pt.coords());
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite(format!("{} at {:?}", self.name, pt.coords())))
        }
    }

    /// Gradient components at `x`: analytic when available, otherwise
    /// central differences with step `max(1e-6, 1e-6·|xᵢ|)`.
    pub fn grad_raw(&self, x: &[f64]) -> Vec<f64> {
        match &self.grad {
            Some(g) => g(x),
            None => numeric_gradient(&*self.eval, x),
        }
    }

    pub(crate) fn check_chart(&self, pt: &Point) -> Result<()> {
        if pt.chart() == self.chart {
            Ok(())
        } else {
            Err(Error::ChartMismatch {
                expected: self.chart.to_string(),
                found: pt.chart().to_string(),
            })
        }
    }

    /// `c · self`.
    pub fn scale(&self, c: f64) -> ScalarField {
        let eval = self.eval.clone();
        let mut out = ScalarField::new(self.chart, format!("{c}*({})", self.name), move |x| c * eval(x));
        if let Some(g) = self.grad.clone() {
            out = out.with_gradient(move |x| g(x).into_iter().map(|v| c * v).collect());
        }
        out
    }

    /// `self + other`; panics when the charts differ.
    pub fn sum(&self, other: &ScalarField) -> ScalarField {
        assert_eq!(self.chart, other.chart, "cannot add fields on different charts");
        let (a, b) = (self.eval.clone(), other.eval.clone());
        let mut out = ScalarField::new(
            self.chart,
            format!("{} + {}", self.name, other.name),
            move |x| a(x) + b(x),
        );
        if let (Some(ga), Some(gb)) = (self.grad.clone(), other.grad.clone()) {
            out = out.with_gradient(move |x| {
                ga(x).into_iter().zip(gb(x)).map(|(u, v)| u + v).collect()
            });
        }
        out
    }

    /// Pulls the field back along an affine embedding `y ↦ x` whose linear
    /// part is a coordinate injection: `embed` maps reduced coordinates to
    /// full ones and `kept[j]` is the full index of reduced coordinate `j`.
    pub(crate) fn pull_back_embedding<E>(&self, chart: Chart, name: String, embed: E, kept: Vec<usize>) -> ScalarField
    where
        E: Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    {
        let embed = Arc::new(embed);
        let eval = self.eval.clone();
        let e1 = embed.clone();
        let mut out = ScalarField::new(chart, name, move |y| eval(&e1(y)));
        if let Some(g) = self.grad.clone() {
            out = out.with_gradient(move |y| {
                let full = g(&embed(y));
                kept.iter().map(|&i| full[i]).collect()
            });
        }
        out
    }
}

impl Add for ScalarField {
    type Output = ScalarField;
    fn add(self, rhs: ScalarField) -> ScalarField {
        self.sum(&rhs)
    }
}

impl Add<&ScalarField> for &ScalarField {
    type Output = ScalarField;
    fn add(self, rhs: &ScalarField) -> ScalarField {
        self.sum(rhs)
    }
}

impl Mul<ScalarField> for f64 {
    type Output = ScalarField;
    fn mul(self, rhs: ScalarField) -> ScalarField {
        rhs.scale(self)
    }
}

impl Neg for ScalarField {
    type Output = ScalarField;
    fn neg(self) -> ScalarField {
        self.scale(-1.0)
    }
}

pub(crate) fn numeric_gradient(f: &dyn Fn(&[f64]) -> f64, x: &[f64]) -> Vec<f64> {
    let mut xs = x.to_vec();
    (0..x.len())
        .map(|i| {
            let h = (1e-6 * x[i].abs()).max(1e-6);
            xs[i] = x[i] + h;
            let fp = f(&xs);
            xs[i] = x[i] - h;
            let fm = f(&xs);
            xs[i] = x[i];
            (fp - fm) / (2.0 * h)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Builtin families.

type RawScalar = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
type RawGradient = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// Potential energy over the configuration coordinates `q`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Potential {
    Zero,
    /// `U = ½ Σ kᵢ qᵢ²`; a single stiffness is broadcast to every coordinate.
    Quadratic { stiffness: Vec<f64> },
    /// `U = k Σ (1 − cos qᵢ)`.
    Cosine { k: f64 },
}

impl Potential {
    fn stiffness(&self, n: usize) -> Result<Vec<f64>> {
        match self {
            Potential::Quadratic { stiffness } => match stiffness.len() {
                1 => Ok(vec![stiffness[0]; n]),
                l if l == n => Ok(stiffness.clone()),
                l => Err(Error::Dimension {
                    what: "potential stiffness",
                    expected: n,
                    found: l,
                }),
            },
            _ => Ok(vec![0.0; n]),
        }
    }

    /// `(U(q), ∂U/∂q)` as closures over `q`.
    fn build(&self, n: usize) -> Result<(RawScalar, RawGradient)> {
        Ok(match self {
            Potential::Zero => (Arc::new(|_| 0.0), Arc::new(move |_| vec![0.0; n])),
            Potential::Quadratic { .. } => {
                let k = self.stiffness(n)?;
                if k.iter().any(|v| !v.is_finite()) {
                    return Err(Error::NonFinite("potential stiffness".into()));
                }
                let k2 = k.clone();
                (
                    Arc::new(move |q: &[f64]| 0.5 * q.iter().zip(&k).map(|(x, s)| s * x * x).sum::<f64>()),
                    Arc::new(move |q: &[f64]| q.iter().zip(&k2).map(|(x, s)| s * x).collect()),
                )
            }
            &Potential::Cosine { k } => {
                if !k.is_finite() {
                    return Err(Error::NonFinite("potential k".into()));
                }
                (
                    Arc::new(move |q: &[f64]| k * q.iter().map(|x| 1.0 - x.cos()).sum::<f64>()),
                    Arc::new(move |q: &[f64]| q.iter().map(|x| k * x.sin()).collect()),
                )
            }
        })
    }

    /// `∂U/∂qᵢ` at `q`.
    pub fn gradient(&self, q: &[f64]) -> Result<Vec<f64>> {
        Ok((self.build(q.len())?.1)(q))
    }
}

/// Radial potential `U(r)`, `r = |q|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RadialPotential {
    /// `U = −k / r`.
    Kepler { k: f64 },
    /// `U = ½ k r²`.
    Harmonic { k: f64 },
}

impl RadialPotential {
    pub fn value(&self, r: f64) -> f64 {
        match *self {
            RadialPotential::Kepler { k } => -k / r,
            RadialPotential::Harmonic { k } => 0.5 * k * r * r,
        }
    }

    pub fn derivative(&self, r: f64) -> f64 {
        match *self {
            RadialPotential::Kepler { k } => k / (r * r),
            RadialPotential::Harmonic { k } => k * r,
        }
    }
}

fn check_mass(m: f64) -> Result<()> {
    if m > 0.0 && m.is_finite() {
        Ok(())
    } else {
        Err(Error::Invalid(format!("mass must be positive and finite, got {m}")))
    }
}

fn check_mechanical_chart(chart: Chart) -> Result<()> {
    match chart.kind() {
        ChartKind::Symplectified => Err(Error::ChartMismatch {
            expected: "symplectic or contact".into(),
            found: chart.to_string(),
        }),
        _ => Ok(()),
    }
}

/// `H = |p|²/(2m) + U(q)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeparableMechanical {
    pub mass: f64,
    pub potential: Potential,
}

impl SeparableMechanical {
    pub fn field(&self, chart: Chart) -> Result<ScalarField> {
        check_mass(self.mass)?;
        check_mechanical_chart(chart)?;
        let n = chart.n();
        let dim = chart.dim();
        let m = self.mass;
        let (u, du) = self.potential.build(n)?;
        Ok(ScalarField::new(chart, "H_mech", move |x| {
            x[n..2 * n].iter().map(|p| p * p).sum::<f64>() / (2.0 * m) + u(&x[..n])
        })
        .with_gradient(move |x| {
            let mut g = vec![0.0; dim];
            g[..n].copy_from_slice(&du(&x[..n]));
            for i in 0..n {
                g[n + i] = x[n + i] / m;
            }
            g
        }))
    }
}

/// `H = H_cm(q, p) + γ z` on a contact chart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContactDamped {
    pub mass: f64,
    pub potential: Potential,
    pub gamma: f64,
}

impl ContactDamped {
    pub fn field(&self, chart: Chart) -> Result<ScalarField> {
        chart.expect(ChartKind::Contact)?;
        if !self.gamma.is_finite() {
            return Err(Error::NonFinite("gamma".into()));
        }
        let mech = SeparableMechanical {
            mass: self.mass,
            potential: self.potential.clone(),
        }
        .field(chart)?;
        let z = ScalarField::coordinate(chart, 2 * chart.n())?;
        Ok((mech + self.gamma * z).renamed("H_damped"))
    }
}

/// `H = |p|²/(2m) + U(|q|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CentralPotential {
    pub mass: f64,
    pub radial: RadialPotential,
}

impl CentralPotential {
    pub fn field(&self, chart: Chart) -> Result<ScalarField> {
        check_mass(self.mass)?;
        check_mechanical_chart(chart)?;
        let n = chart.n();
        let dim = chart.dim();
        let (m, radial) = (self.mass, self.radial);
        Ok(ScalarField::new(chart, "H_central", move |x| {
            let r = x[..n].iter().map(|q| q * q).sum::<f64>().sqrt();
            x[n..2 * n].iter().map(|p| p * p).sum::<f64>() / (2.0 * m) + radial.value(r)
        })
        .with_gradient(move |x| {
            let r = x[..n].iter().map(|q| q * q).sum::<f64>().sqrt();
            let du = radial.derivative(r) / r;
            let mut g = vec![0.0; dim];
            for i in 0..n {
                g[i] = du * x[i];
                g[n + i] = x[n + i] / m;
            }
            g
        }))
    }
}

/// `H = |p|²/(2m) + b·p + γ z`: no `q` dependence, so invariant under every
/// translation of the configuration coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TranslationInvariant {
    pub mass: f64,
    #[serde(default)]
    pub drift: Vec<f64>,
    #[serde(default)]
    pub gamma: f64,
}

impl TranslationInvariant {
    pub fn field(&self, chart: Chart) -> Result<ScalarField> {
        check_mass(self.mass)?;
        check_mechanical_chart(chart)?;
        let n = chart.n();
        let dim = chart.dim();
        let drift = match self.drift.len() {
            0 => vec![0.0; n],
            l if l == n => self.drift.clone(),
            l => {
                return Err(Error::Dimension {
                    what: "translation-invariant drift",
                    expected: n,
                    found: l,
                })
            }
        };
        if chart.kind() == ChartKind::Symplectic && self.gamma != 0.0 {
            return Err(Error::Invalid("gamma requires a contact chart".into()));
        }
        let (m, gamma) = (self.mass, self.gamma);
        let contact = chart.kind() == ChartKind::Contact;
        let d2 = drift.clone();
        Ok(ScalarField::new(chart, "H_free", move |x| {
            let p = &x[n..2 * n];
            let z = if contact { x[2 * n] } else { 0.0 };
            p.iter().map(|v| v * v).sum::<f64>() / (2.0 * m)
                + p.iter().zip(&drift).map(|(a, b)| a * b).sum::<f64>()
                + gamma * z
        })
        .with_gradient(move |x| {
            let mut g = vec![0.0; dim];
            for i in 0..n {
                g[n + i] = x[n + i] / m + d2[i];
            }
            if contact {
                g[2 * n] = gamma;
            }
            g
        }))
    }
}

/// Builtin Hamiltonian families, nameable in scenario files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum BuiltinHamiltonian {
    SeparableMechanical(SeparableMechanical),
    ContactDamped(ContactDamped),
    CentralPotential(CentralPotential),
    TranslationInvariant(TranslationInvariant),
}

impl BuiltinHamiltonian {
    pub const FAMILIES: [&'static str; 4] = [
        "separable_mechanical",
        "contact_damped",
        "central_potential",
        "translation_invariant",
    ];

    pub fn field(&self, chart: Chart) -> Result<ScalarField> {
        match self {
            BuiltinHamiltonian::SeparableMechanical(h) => h.field(chart),
            BuiltinHamiltonian::ContactDamped(h) => h.field(chart),
            BuiltinHamiltonian::CentralPotential(h) => h.field(chart),
            BuiltinHamiltonian::TranslationInvariant(h) => h.field(chart),
        }
    }
}

/// A polynomial `Σ c · Π xᵢ^{kᵢ}` with an analytic gradient.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    pub terms: Vec<(f64, Vec<u32>)>,
}

impl Polynomial {
    pub fn field(&self, chart: Chart) -> Result<ScalarField> {
        let dim = chart.dim();
        if let Some((_, e)) = self.terms.iter().find(|(_, e)| e.len() != dim) {
            return Err(Error::Dimension {
                what: "monomial exponents",
                expected: dim,
                found: e.len(),
            });
        }
        let terms = Arc::new(self.terms.clone());
        let t2 = terms.clone();
        Ok(ScalarField::new(chart, "H_poly", move |x| {
            terms
                .iter()
                .map(|(c, e)| c * x.iter().zip(e).map(|(v, &k)| v.powi(k as i32)).product::<f64>())
                .sum()
        })
        .with_gradient(move |x| {
            let mut g = vec![0.0; dim];
            for (c, e) in t2.iter() {
                for (j, gj) in g.iter_mut().enumerate() {
                    if e[j] == 0 {
                        continue;
                    }
                    let mut prod = c * f64::from(e[j]);
                    for (i, (v, &k)) in x.iter().zip(e).enumerate() {
                        let k = if i == j { k - 1 } else { k };
                        prod *= v.powi(k as i32);
                    }
                    *gj += prod;
                }
            }
            g
        }))
    }
}

// ---------------------------------------------------------------------------
// Operations.

/// `dH` at `pt`.
pub fn grad(h: &ScalarField, pt: &Point) -> Result<Covector> {
    h.check_chart(pt)?;
    let g = h.grad_raw(pt.coords());
    if g.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite(format!("gradient of {}", h.name)));
    }
    Covector::new(pt, g)
}

/// Symplectic `X_H = ∂H/∂pᵢ ∂/∂qⁱ − ∂H/∂qⁱ ∂/∂pᵢ` on raw coordinates.
pub(crate) fn xh_symplectic_raw(n: usize, g: &[f64]) -> Vec<f64> {
    let mut v = vec![0.0; 2 * n];
    for i in 0..n {
        v[i] = g[n + i];
        v[n + i] = -g[i];
    }
    v
}

/// Contact `X_H` in Darboux form on raw coordinates.
pub(crate) fn xh_contact_raw(n: usize, x: &[f64], h: f64, g: &[f64]) -> Vec<f64> {
    let hz = g[2 * n];
    let mut v = vec![0.0; 2 * n + 1];
    let mut p_hp = 0.0;
    for i in 0..n {
        v[i] = g[n + i];
        v[n + i] = -(g[i] + x[n + i] * hz);
        p_hp += x[n + i] * g[n + i];
    }
    v[2 * n] = p_hp - h;
    v
}

pub fn xh_symplectic(h: &ScalarField, pt: &Point) -> Result<TangentVector> {
    pt.chart().expect(ChartKind::Symplectic)?;
    let g = grad(h, pt)?;
    TangentVector::new(pt, xh_symplectic_raw(pt.chart().n(), g.components()))
}

/// `X_H = ∂H/∂pᵢ ∂/∂qⁱ − (∂H/∂qⁱ + pᵢ ∂H/∂z) ∂/∂pᵢ + (pᵢ ∂H/∂pᵢ − H) ∂/∂z`.
pub fn xh_contact(h: &ScalarField, pt: &Point) -> Result<TangentVector> {
    pt.chart().expect(ChartKind::Contact)?;
    let g = grad(h, pt)?;
    let hv = h.value(pt)?;
    TangentVector::new(pt, xh_contact_raw(pt.chart().n(), pt.coords(), hv, g.components()))
}

/// `𝓡(H) = ∂H/∂z`.
pub fn reeb_derivative(h: &ScalarField, pt: &Point) -> Result<f64> {
    pt.chart().expect(ChartKind::Contact)?;
    Ok(grad(h, pt)?.components()[2 * pt.chart().n()])
}

/// `𝓛_{X_H} H = −𝓡(H) H`.
pub fn dissipation_rate(h: &ScalarField, pt: &Point) -> Result<f64> {
    Ok(-h.value(pt)? * reeb_derivative(h, pt)?)
}

/// Trace of the Jacobian of the contact `X_H`, by central differences of
/// the vector field with step [`DIVERGENCE_STEP`].
pub fn divergence_contact(h: &ScalarField, pt: &Point) -> Result<f64> {
    pt.chart().expect(ChartKind::Contact)?;
    h.check_chart(pt)?;
    let n = pt.chart().n();
    let field = |x: &[f64]| xh_contact_raw(n, x, h.eval_raw(x), &h.grad_raw(x));
    let mut x = pt.coords().to_vec();
    let mut div = 0.0;
    for i in 0..x.len() {
        let xi = x[i];
        x[i] = xi + DIVERGENCE_STEP;
        let fp = field(&x)[i];
        x[i] = xi - DIVERGENCE_STEP;
        let fm = field(&x)[i];
        x[i] = xi;
        div += (fp - fm) / (2.0 * DIVERGENCE_STEP);
    }
    if div.is_finite() {
        Ok(div)
    } else {
        Err(Error::NonFinite("divergence of X_H".into()))
    }
}
