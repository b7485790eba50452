//! Darboux charts, structure tensors, musical isomorphisms and orthocomplements.
//!
//! Every chart is a global Darboux model `ℝ^dim`:
//!
//! | kind            | dim      | layout            | structure                          |
//! |-----------------|----------|-------------------|------------------------------------|
//! | `Symplectic`    | `2n`     | `(q, p)`          | `ω = dqⁱ ∧ dpᵢ`                    |
//! | `Contact`       | `2n + 1` | `(q, p, z)`       | `η = dz − pᵢ dqⁱ`, `𝓡 = ∂/∂z`       |
//! | `Symplectified` | `2n + 2` | `(q, p, z, t)`    | `Ω = eᵗ (dη + dt ∧ η)`             |
//!
//! Subspace equality and containment are decided numerically: basis vectors
//! are normalized and a vector belongs to a span when its relative projection
//! residual is below [`SUBSPACE_TOL`].

use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::linalg;
use crate::{Error, Result};

/// Projection-residual tolerance for subspace containment and equality.
pub const SUBSPACE_TOL: f64 = 1e-8;

/// Basis vectors whose normalized smallest singular value is below this are
/// rejected as dependent.
pub const INDEPENDENCE_TOL: f64 = 1e-9;

/// Residual bound for the linear solve behind [`sharp_contact`].
pub const SHARP_SOLVE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChartKind {
    Symplectic,
    Contact,
    Symplectified,
}

impl fmt::Display for ChartKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ChartKind::Symplectic => "symplectic",
            ChartKind::Contact => "contact",
            ChartKind::Symplectified => "symplectified",
        };
        f.write_str(s)
    }
}

/// A global Darboux chart with `n` degrees of freedom.
///
/// Contact charts accept `n = 0` (the line `{z}` with `η = dz`), which is
/// what reducing a one-degree-of-freedom contact system by a translation
/// produces. Symplectic charts need `n ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Chart {
    kind: ChartKind,
    n: usize,
}

impl Chart {
    pub fn new(kind: ChartKind, n: usize) -> Result<Self> {
        if kind == ChartKind::Symplectic && n == 0 {
            return Err(Error::Invalid(
                "symplectic charts need at least one degree of freedom".into(),
            ));
        }
        Ok(Chart { kind, n })
    }

    pub fn symplectic(n: usize) -> Result<Self> {
        Chart::new(ChartKind::Symplectic, n)
    }

    pub fn contact(n: usize) -> Result<Self> {
        Chart::new(ChartKind::Contact, n)
    }

    pub fn symplectified(n: usize) -> Result<Self> {
        Chart::new(ChartKind::Symplectified, n)
    }

    pub fn kind(&self) -> ChartKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        match self.kind {
            ChartKind::Symplectic => 2 * self.n,
            ChartKind::Contact => 2 * self.n + 1,
            ChartKind::Symplectified => 2 * self.n + 2,
        }
    }

    pub fn q_index(&self, i: usize) -> usize {
        i
    }

    pub fn p_index(&self, i: usize) -> usize {
        self.n + i
    }

    pub fn z_index(&self) -> Option<usize> {
        match self.kind {
            ChartKind::Symplectic => None,
            _ => Some(2 * self.n),
        }
    }

    pub fn t_index(&self) -> Option<usize> {
        match self.kind {
            ChartKind::Symplectified => Some(2 * self.n + 1),
            _ => None,
        }
    }

    /// The contact chart underlying a symplectified chart.
    pub fn base(&self) -> Option<Chart> {
        match self.kind {
            ChartKind::Symplectified => Some(Chart {
                kind: ChartKind::Contact,
                n: self.n,
            }),
            _ => None,
        }
    }

    /// Coordinate labels in layout order: `q1..qn, p1..pn[, z][, t]`.
    pub fn coordinate_names(&self) -> Vec<String> {
        let mut names: Vec<String> = (1..=self.n).map(|i| format!("q{i}")).collect();
        names.extend((1..=self.n).map(|i| format!("p{i}")));
        if self.z_index().is_some() {
            names.push("z".into());
        }
        if self.t_index().is_some() {
            names.push("t".into());
        }
        names
    }

    pub(crate) fn expect(&self, kind: ChartKind) -> Result<()> {
        if self.kind == kind {
            Ok(())
        } else {
            Err(Error::ChartMismatch {
                expected: kind.to_string(),
                found: self.to_string(),
            })
        }
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} chart (n = {}, dim = {})", self.kind, self.n, self.dim())
    }
}

fn check_components(chart: &Chart, what: &'static str, c: &[f64]) -> Result<()> {
    if c.len() != chart.dim() {
        return Err(Error::Dimension {
            what,
            expected: chart.dim(),
            found: c.len(),
        });
    }
    if c.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite(what.into()));
    }
    Ok(())
}

/// A point `x ∈ M` in Darboux coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    chart: Chart,
    coords: Vec<f64>,
}

impl Point {
    pub fn new(chart: Chart, coords: Vec<f64>) -> Result<Self> {
        check_components(&chart, "point coordinates", &coords)?;
        Ok(Point { chart, coords })
    }

    pub fn origin(chart: Chart) -> Self {
        Point {
            chart,
            coords: vec![0.0; chart.dim()],
        }
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    pub fn q(&self) -> &[f64] {
        &self.coords[..self.chart.n]
    }

    pub fn p(&self) -> &[f64] {
        &self.coords[self.chart.n..2 * self.chart.n]
    }

    pub fn z(&self) -> Option<f64> {
        self.chart.z_index().map(|i| self.coords[i])
    }

    pub fn t(&self) -> Option<f64> {
        self.chart.t_index().map(|i| self.coords[i])
    }
}

/// A tangent vector `v ∈ T_xM`.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector {
    base: Point,
    components: Vec<f64>,
}

impl TangentVector {
    pub fn new(base: &Point, components: Vec<f64>) -> Result<Self> {
        check_components(&base.chart, "tangent vector", &components)?;
        Ok(TangentVector {
            base: base.clone(),
            components,
        })
    }

    /// The coordinate vector `∂/∂x^i`.
    pub fn coordinate(base: &Point, i: usize) -> Self {
        TangentVector {
            base: base.clone(),
            components: linalg::unit(base.chart.dim(), i),
        }
    }

    pub fn zero(base: &Point) -> Self {
        TangentVector {
            base: base.clone(),
            components: vec![0.0; base.chart.dim()],
        }
    }

    pub fn base(&self) -> &Point {
        &self.base
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    pub fn into_components(self) -> Vec<f64> {
        self.components
    }

    pub fn norm(&self) -> f64 {
        linalg::norm(&self.components)
    }
}

/// A covector `α ∈ T*_xM`.
#[derive(Debug, Clone, PartialEq)]
pub struct Covector {
    base: Point,
    components: Vec<f64>,
}

impl Covector {
    pub fn new(base: &Point, components: Vec<f64>) -> Result<Self> {
        check_components(&base.chart, "covector", &components)?;
        Ok(Covector {
            base: base.clone(),
            components,
        })
    }

    /// The coordinate covector `dx^i`.
    pub fn coordinate(base: &Point, i: usize) -> Self {
        Covector {
            base: base.clone(),
            components: linalg::unit(base.chart.dim(), i),
        }
    }

    pub fn base(&self) -> &Point {
        &self.base
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    pub fn into_components(self) -> Vec<f64> {
        self.components
    }

    /// Evaluates `α(v)`.
    pub fn apply(&self, v: &TangentVector) -> Result<f64> {
        same_chart(&self.base, &v.base)?;
        Ok(linalg::dot(&self.components, &v.components))
    }
}

/// A linearly independent family of tangent vectors at one point, spanning
/// a subspace `Δ_x ⊂ T_xM`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceBasis {
    base: Point,
    vectors: Vec<Vec<f64>>,
}

impl SubspaceBasis {
    pub fn new(base: &Point, vectors: Vec<Vec<f64>>) -> Result<Self> {
        for v in &vectors {
            check_components(&base.chart, "subspace basis vector", v)?;
        }
        let smallest = linalg::min_normalized_singular(&vectors, base.chart.dim());
        if smallest <= INDEPENDENCE_TOL {
            return Err(Error::RankDeficient(smallest));
        }
        Ok(SubspaceBasis {
            base: base.clone(),
            vectors,
        })
    }

    pub fn from_vectors(base: &Point, vectors: &[TangentVector]) -> Result<Self> {
        for v in vectors {
            same_chart(base, &v.base)?;
        }
        SubspaceBasis::new(base, vectors.iter().map(|v| v.components.clone()).collect())
    }

    /// Span of the coordinate directions with the given indices.
    pub fn coordinate_span(base: &Point, indices: &[usize]) -> Result<Self> {
        let dim = base.chart.dim();
        if let Some(&bad) = indices.iter().find(|&&i| i >= dim) {
            return Err(Error::Invalid(format!("coordinate index {bad} out of range for dim {dim}")));
        }
        SubspaceBasis::new(base, indices.iter().map(|&i| linalg::unit(dim, i)).collect())
    }

    /// Whole tangent space.
    pub fn full(base: &Point) -> Self {
        let dim = base.chart.dim();
        SubspaceBasis {
            base: base.clone(),
            vectors: (0..dim).map(|i| linalg::unit(dim, i)).collect(),
        }
    }

    /// Orthonormal basis of the span of arbitrary (possibly dependent) vectors.
    pub fn spanned_by(base: &Point, vectors: &[Vec<f64>]) -> Result<Self> {
        for v in vectors {
            check_components(&base.chart, "spanning vector", v)?;
        }
        Ok(SubspaceBasis {
            base: base.clone(),
            vectors: linalg::orthonormalize(vectors, base.chart.dim()),
        })
    }

    pub fn base(&self) -> &Point {
        &self.base
    }

    pub fn chart(&self) -> Chart {
        self.base.chart
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    /// Relative distance of `v` from this subspace.
    pub fn projection_residual(&self, v: &[f64]) -> f64 {
        let onb = linalg::orthonormalize(&self.vectors, self.chart().dim());
        linalg::projection_residual(v, &onb)
    }

    /// Largest residual of `other`'s basis vectors projected onto `self`;
    /// zero when `other ⊆ self`.
    pub fn containment_residual(&self, other: &SubspaceBasis) -> f64 {
        linalg::containment_residual(&self.vectors, &other.vectors, self.chart().dim())
    }

    pub fn contains(&self, other: &SubspaceBasis) -> bool {
        self.containment_residual(other) < SUBSPACE_TOL
    }

    /// Mutual containment residual, plus a rank mismatch check.
    pub fn equality_residual(&self, other: &SubspaceBasis) -> f64 {
        if self.rank() != other.rank() {
            return f64::INFINITY;
        }
        self.containment_residual(other)
            .max(other.containment_residual(self))
    }

    pub fn same_subspace(&self, other: &SubspaceBasis) -> bool {
        self.equality_residual(other) < SUBSPACE_TOL
    }

    /// `span(self ∪ other)`.
    pub fn sum(&self, other: &SubspaceBasis) -> Result<SubspaceBasis> {
        same_chart(&self.base, &other.base)?;
        let mut all = self.vectors.clone();
        all.extend(other.vectors.iter().cloned());
        SubspaceBasis::spanned_by(&self.base, &all)
    }

    /// `self ∩ other`, as the annihilator of the sum of annihilators.
    pub fn intersection(&self, other: &SubspaceBasis) -> Result<SubspaceBasis> {
        same_chart(&self.base, &other.base)?;
        let dim = self.chart().dim();
        let mut rows = linalg::null_space(&self.vectors, dim);
        rows.extend(linalg::null_space(&other.vectors, dim));
        Ok(SubspaceBasis {
            base: self.base.clone(),
            vectors: linalg::null_space(&rows, dim),
        })
    }
}

fn same_chart(a: &Point, b: &Point) -> Result<()> {
    if a.chart == b.chart {
        Ok(())
    } else {
        Err(Error::ChartMismatch {
            expected: a.chart.to_string(),
            found: b.chart.to_string(),
        })
    }
}

fn check_vector(pt: &Point, v: &TangentVector) -> Result<()> {
    same_chart(pt, &v.base)
}

// ---------------------------------------------------------------------------
// Raw coordinate formulas. `n` is the number of degrees of freedom; slices
// follow the documented layout.

/// `Σᵢ (u_{qᵢ} v_{pᵢ} − u_{pᵢ} v_{qᵢ})`.
pub(crate) fn canonical_pairing(n: usize, u: &[f64], v: &[f64]) -> f64 {
    (0..n).map(|i| u[i] * v[n + i] - u[n + i] * v[i]).sum()
}

/// `η(v) = v_z − Σ pᵢ v_{qᵢ}` at the contact (or symplectified) point `x`.
pub(crate) fn eta_raw(n: usize, x: &[f64], v: &[f64]) -> f64 {
    v[2 * n] - (0..n).map(|i| x[n + i] * v[i]).sum::<f64>()
}

/// Components of `η` at `x`, in a `dim`-slot covector (extra slots zero).
pub(crate) fn eta_components(n: usize, x: &[f64], dim: usize) -> Vec<f64> {
    let mut e = vec![0.0; dim];
    for i in 0..n {
        e[i] = -x[n + i];
    }
    e[2 * n] = 1.0;
    e
}

/// `Ω(u, v) = eᵗ [dη(u_b, v_b) + u_t η(v_b) − v_t η(u_b)]` on a symplectified
/// chart with base dimension `2n + 1`.
pub(crate) fn lifted_omega_raw(n: usize, x: &[f64], u: &[f64], v: &[f64]) -> f64 {
    let t = x[2 * n + 1];
    let (ut, vt) = (u[2 * n + 1], v[2 * n + 1]);
    // grouped so that swapping u and v negates every partial result exactly
    t.exp() * (canonical_pairing(n, u, v) + (ut * eta_raw(n, x, v) - vt * eta_raw(n, x, u)))
}

/// Matrix `M_ij = σ(e_i, e_j)` of the chart's structure 2-form: `ω`,
/// `dη` or `Ω`.
pub(crate) fn two_form_matrix(pt: &Point) -> DMatrix<f64> {
    let chart = pt.chart;
    let n = chart.n;
    let dim = chart.dim();
    match chart.kind {
        ChartKind::Symplectic | ChartKind::Contact => {
            let mut m = DMatrix::zeros(dim, dim);
            for i in 0..n {
                m[(i, n + i)] = 1.0;
                m[(n + i, i)] = -1.0;
            }
            m
        }
        ChartKind::Symplectified => DMatrix::from_fn(dim, dim, |i, j| {
            lifted_omega_raw(n, &pt.coords, &linalg::unit(dim, i), &linalg::unit(dim, j))
        }),
    }
}

// ---------------------------------------------------------------------------
// Structure tensors.

/// Contact form `η = dz − pᵢ dqⁱ` evaluated on `v`.
pub fn eta(pt: &Point, v: &TangentVector) -> Result<f64> {
    pt.chart.expect(ChartKind::Contact)?;
    check_vector(pt, v)?;
    Ok(eta_raw(pt.chart.n, &pt.coords, &v.components))
}

/// `η(x)` as a covector.
pub fn eta_covector(pt: &Point) -> Result<Covector> {
    pt.chart.expect(ChartKind::Contact)?;
    let dim = pt.chart.dim();
    Covector::new(pt, eta_components(pt.chart.n, &pt.coords, dim))
}

/// `dη = dqⁱ ∧ dpᵢ`.
pub fn d_eta(pt: &Point, u: &TangentVector, v: &TangentVector) -> Result<f64> {
    pt.chart.expect(ChartKind::Contact)?;
    check_vector(pt, u)?;
    check_vector(pt, v)?;
    Ok(canonical_pairing(pt.chart.n, &u.components, &v.components))
}

/// Canonical symplectic form `ω = dqⁱ ∧ dpᵢ`.
pub fn omega_symplectic(pt: &Point, u: &TangentVector, v: &TangentVector) -> Result<f64> {
    pt.chart.expect(ChartKind::Symplectic)?;
    check_vector(pt, u)?;
    check_vector(pt, v)?;
    Ok(canonical_pairing(pt.chart.n, &u.components, &v.components))
}

/// Liouville form `λ = pᵢ dqⁱ` of a symplectic chart modeled as `T*ℝⁿ`.
pub fn liouville(pt: &Point, v: &TangentVector) -> Result<f64> {
    pt.chart.expect(ChartKind::Symplectic)?;
    check_vector(pt, v)?;
    let n = pt.chart.n;
    Ok((0..n).map(|i| pt.coords[n + i] * v.components[i]).sum())
}

/// Reeb field `𝓡 = ∂/∂z`.
pub fn reeb(pt: &Point) -> Result<TangentVector> {
    pt.chart.expect(ChartKind::Contact)?;
    Ok(TangentVector::coordinate(pt, 2 * pt.chart.n))
}

// ---------------------------------------------------------------------------
// Musical isomorphisms.

fn flat_contact_matrix(pt: &Point) -> DMatrix<f64> {
    let dim = pt.chart.dim();
    let e = eta_components(pt.chart.n, &pt.coords, dim);
    let w = two_form_matrix(pt);
    // ♭(v)_j = Σ_i v_i dη(e_i, e_j) + η_j η(v)
    DMatrix::from_fn(dim, dim, |j, i| w[(i, j)] + e[j] * e[i])
}

/// `♭(v) = i_v dη + η(v) η`.
pub fn flat_contact(pt: &Point, v: &TangentVector) -> Result<Covector> {
    pt.chart.expect(ChartKind::Contact)?;
    check_vector(pt, v)?;
    let n = pt.chart.n;
    let x = &pt.coords;
    let ev = eta_raw(n, x, &v.components);
    let mut a = vec![0.0; pt.chart.dim()];
    for i in 0..n {
        a[i] = -v.components[n + i] - ev * x[n + i];
        a[n + i] = v.components[i];
    }
    a[2 * n] = ev;
    Covector::new(pt, a)
}

/// Inverse of [`flat_contact`], by solving the `(2n+1)×(2n+1)` system.
pub fn sharp_contact(pt: &Point, a: &Covector) -> Result<TangentVector> {
    pt.chart.expect(ChartKind::Contact)?;
    same_chart(pt, &a.base)?;
    let m = flat_contact_matrix(pt);
    let (v, residual) = linalg::solve(&m, &a.components).ok_or(Error::SolveFailed(f64::INFINITY))?;
    if residual > SHARP_SOLVE_TOL || v.iter().any(|x| !x.is_finite()) {
        return Err(Error::SolveFailed(residual));
    }
    TangentVector::new(pt, v)
}

/// `♭(u) = i_u ω`.
pub fn flat_symplectic(pt: &Point, u: &TangentVector) -> Result<Covector> {
    pt.chart.expect(ChartKind::Symplectic)?;
    check_vector(pt, u)?;
    let n = pt.chart.n;
    let mut a = vec![0.0; 2 * n];
    for i in 0..n {
        a[i] = -u.components[n + i];
        a[n + i] = u.components[i];
    }
    Covector::new(pt, a)
}

/// Closed-form Darboux inverse: `♯(dqⁱ) = −∂/∂pᵢ`, `♯(dpᵢ) = ∂/∂qⁱ`.
pub fn sharp_symplectic(pt: &Point, a: &Covector) -> Result<TangentVector> {
    pt.chart.expect(ChartKind::Symplectic)?;
    same_chart(pt, &a.base)?;
    let n = pt.chart.n;
    let mut v = vec![0.0; 2 * n];
    for i in 0..n {
        v[i] = a.components[n + i];
        v[n + i] = -a.components[i];
    }
    TangentVector::new(pt, v)
}

/// `♯` of the symplectified form `Ω`, by linear solve.
pub(crate) fn sharp_lifted(pt: &Point, a: &[f64]) -> Result<Vec<f64>> {
    pt.chart.expect(ChartKind::Symplectified)?;
    let m = two_form_matrix(pt).transpose();
    let (v, residual) = linalg::solve(&m, a).ok_or(Error::SolveFailed(f64::INFINITY))?;
    if residual > SHARP_SOLVE_TOL {
        return Err(Error::SolveFailed(residual));
    }
    Ok(v)
}

/// Jacobi morphism `♯_Λ(α) = ♯(α) − α(𝓡) 𝓡`.
pub fn sharp_lambda(pt: &Point, a: &Covector) -> Result<TangentVector> {
    let mut v = sharp_contact(pt, a)?.components;
    let z = 2 * pt.chart.n;
    v[z] -= a.components[z];
    TangentVector::new(pt, v)
}

// ---------------------------------------------------------------------------
// Annihilators and orthocomplements.

/// `Δ° = {α | α(Δ) = 0}` as an orthonormal family of covectors.
pub fn annihilator(b: &SubspaceBasis) -> Result<Vec<Covector>> {
    let smallest = linalg::min_normalized_singular(&b.vectors, b.chart().dim());
    if smallest <= INDEPENDENCE_TOL {
        return Err(Error::RankDeficient(smallest));
    }
    linalg::null_space(&b.vectors, b.chart().dim())
        .into_iter()
        .map(|a| Covector::new(&b.base, a))
        .collect()
}

/// Symplectic orthocomplement `Δ^⊥ = ♯(Δ°)`, on symplectic charts (`ω`) and
/// symplectified charts (`Ω`).
pub fn complement_omega(b: &SubspaceBasis) -> Result<SubspaceBasis> {
    let pt = &b.base;
    let ann = annihilator(b)?;
    let images = match pt.chart.kind {
        ChartKind::Symplectic => ann
            .iter()
            .map(|a| sharp_symplectic(pt, a).map(|v| v.components))
            .collect::<Result<Vec<_>>>()?,
        ChartKind::Symplectified => ann
            .iter()
            .map(|a| sharp_lifted(pt, &a.components))
            .collect::<Result<Vec<_>>>()?,
        ChartKind::Contact => {
            return Err(Error::ChartMismatch {
                expected: "symplectic or symplectified".into(),
                found: pt.chart.to_string(),
            })
        }
    };
    SubspaceBasis::spanned_by(pt, &images)
}

/// Contact complement `Δ^{⊥_Λ} = ♯_Λ(Δ°)`. `♯_Λ` has kernel `⟨η⟩`, so the
/// images are re-orthonormalized.
pub fn complement_lambda(b: &SubspaceBasis) -> Result<SubspaceBasis> {
    let pt = &b.base;
    pt.chart.expect(ChartKind::Contact)?;
    let images = annihilator(b)?
        .iter()
        .map(|a| sharp_lambda(pt, a).map(|v| v.components))
        .collect::<Result<Vec<_>>>()?;
    SubspaceBasis::spanned_by(pt, &images)
}

/// `Δ^{⊥_{dη}} = {v | dη(v, Δ) = 0}`.
pub fn complement_deta(b: &SubspaceBasis) -> Result<SubspaceBasis> {
    let pt = &b.base;
    pt.chart.expect(ChartKind::Contact)?;
    let w = two_form_matrix(pt);
    let dim = pt.chart.dim();
    let rows: Vec<Vec<f64>> = b
        .vectors
        .iter()
        .map(|bv| (0..dim).map(|i| (0..dim).map(|j| w[(i, j)] * bv[j]).sum()).collect())
        .collect();
    Ok(SubspaceBasis {
        base: pt.clone(),
        vectors: linalg::null_space(&rows, dim),
    })
}

/// Horizontal distribution `ℋ_x = ker η_x`.
pub fn horizontal_space(pt: &Point) -> Result<SubspaceBasis> {
    pt.chart.expect(ChartKind::Contact)?;
    let e = eta_components(pt.chart.n, &pt.coords, pt.chart.dim());
    Ok(SubspaceBasis {
        base: pt.clone(),
        vectors: linalg::null_space(&[e], pt.chart.dim()),
    })
}

// ---------------------------------------------------------------------------
// Classification.

/// Relative position of a subspace with respect to `ℋ` and `𝓡`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointPosition {
    Horizontal,
    Vertical,
    Oblique,
}

/// Horizontal when `η` vanishes on `Δ`; vertical when `𝓡 ∈ Δ`; oblique
/// otherwise (then `Δ = Δ∩ℋ ⊕ ⟨𝓡 + v⟩` with `v ∈ ℋ \ Δ`).
pub fn classify_point(b: &SubspaceBasis) -> Result<PointPosition> {
    let pt = &b.base;
    pt.chart.expect(ChartKind::Contact)?;
    let n = pt.chart.n;
    let onb = linalg::orthonormalize(&b.vectors, pt.chart.dim());
    let horizontal = onb
        .iter()
        .all(|v| eta_raw(n, &pt.coords, v).abs() < SUBSPACE_TOL);
    if horizontal {
        return Ok(PointPosition::Horizontal);
    }
    let r = linalg::unit(pt.chart.dim(), 2 * n);
    if linalg::projection_residual(&r, &onb) < INDEPENDENCE_TOL {
        Ok(PointPosition::Vertical)
    } else {
        Ok(PointPosition::Oblique)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubmanifoldType {
    Isotropic,
    Coisotropic,
    Legendrian,
    Lagrangian,
    SymplecticSub,
    None,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubmanifoldClassification {
    pub per_sample: Vec<SubmanifoldType>,
    /// The common verdict, or `None` when samples disagree.
    pub aggregate: SubmanifoldType,
}

/// Classifies one tangent space `T_xN` against its orthocomplement: `ω`/`Ω`
/// on symplectic and symplectified charts, `♯_Λ` on contact charts.
pub fn classify_tangent_space(b: &SubspaceBasis) -> Result<SubmanifoldType> {
    let chart = b.chart();
    let complement = match chart.kind {
        ChartKind::Contact => complement_lambda(b)?,
        _ => complement_omega(b)?,
    };
    let isotropic = complement.contains(b);
    let coisotropic = b.contains(&complement);
    let half = match chart.kind {
        ChartKind::Contact => chart.n,
        _ => chart.dim() / 2,
    };
    let verdict = if isotropic && b.rank() == half {
        match chart.kind {
            ChartKind::Contact => SubmanifoldType::Legendrian,
            _ => SubmanifoldType::Lagrangian,
        }
    } else if isotropic {
        SubmanifoldType::Isotropic
    } else if coisotropic {
        SubmanifoldType::Coisotropic
    } else if chart.kind != ChartKind::Contact
        && linalg::rank(
            &[b.vectors.clone(), complement.vectors.clone()].concat(),
            chart.dim(),
        ) == b.rank() + complement.rank()
    {
        SubmanifoldType::SymplecticSub
    } else {
        SubmanifoldType::None
    };
    Ok(verdict)
}

/// Classifies sampled tangent spaces of one submanifold.
pub fn classify_submanifold(samples: &[SubspaceBasis]) -> Result<SubmanifoldClassification> {
    if let Some(first) = samples.first() {
        let kind = first.chart().kind;
        if let Some(bad) = samples.iter().find(|s| s.chart().kind != kind) {
            return Err(Error::ChartMismatch {
                expected: kind.to_string(),
                found: bad.chart().to_string(),
            });
        }
    }
    let per_sample = samples
        .iter()
        .map(classify_tangent_space)
        .collect::<Result<Vec<_>>>()?;
    let aggregate = match per_sample.first() {
        Some(&v) if per_sample.iter().all(|&s| s == v) => v,
        _ => SubmanifoldType::None,
    };
    Ok(SubmanifoldClassification {
        per_sample,
        aggregate,
    })
}
