//! Built-in submanifolds of contact charts with known tangent spaces, and
//! the structural checks run over them.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::geometry::{
    classify_point, classify_tangent_space, complement_deta, complement_lambda, horizontal_space, Point,
    PointPosition, SubmanifoldType, SubspaceBasis,
};
use crate::symplectification::lift_submanifold;
use crate::{sampling, Chart, Result};

type Sampler = fn(&mut ChaCha8Rng) -> SubspaceBasis;

/// A submanifold `N` given by a sampler of `(x, T_xN)` with `x ∈ N`.
#[derive(Clone)]
pub struct Submanifold {
    pub name: &'static str,
    pub chart: Chart,
    pub expected: SubmanifoldType,
    pub position: PointPosition,
    sampler: Sampler,
}

impl std::fmt::Debug for Submanifold {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Submanifold")
            .field("name", &self.name)
            .field("chart", &self.chart)
            .field("expected", &self.expected)
            .field("position", &self.position)
            .finish()
    }
}

impl Submanifold {
    pub fn sample(&self, rng: &mut ChaCha8Rng) -> SubspaceBasis {
        (self.sampler)(rng)
    }

    pub fn samples(&self, rng: &mut ChaCha8Rng, count: usize) -> Vec<SubspaceBasis> {
        (0..count).map(|_| self.sample(rng)).collect()
    }
}

fn contact(n: usize) -> Chart {
    Chart::contact(n).expect("valid chart")
}

fn basis(pt: &Point, vectors: Vec<Vec<f64>>) -> SubspaceBasis {
    SubspaceBasis::new(pt, vectors).expect("independent corpus basis")
}

fn span(pt: &Point, indices: &[usize]) -> SubspaceBasis {
    SubspaceBasis::coordinate_span(pt, indices).expect("independent corpus basis")
}

fn at(n: usize, coords: Vec<f64>) -> Point {
    Point::new(contact(n), coords).expect("finite corpus point")
}

fn coord<R: Rng>(rng: &mut R) -> f64 {
    rng.gen_range(-2.0..=2.0)
}

/// `{p = 0, z = 0}`.
fn zero_section(rng: &mut ChaCha8Rng, n: usize) -> SubspaceBasis {
    let mut c = vec![0.0; 2 * n + 1];
    for q in c.iter_mut().take(n) {
        *q = coord(rng);
    }
    let idx: Vec<usize> = (0..n).collect();
    span(&at(n, c), &idx)
}

/// 1-jet of `f(q) = sin q₁ + q₁q₂²/2`: `{(q, ∇f(q), f(q))}`, spanned by
/// `∂_{qⁱ} + Σⱼ fᵢⱼ ∂_{pⱼ} + fᵢ ∂_z`.
fn one_jet_n2(rng: &mut ChaCha8Rng) -> SubspaceBasis {
    let (a, b) = (coord(rng), coord(rng));
    let f = a.sin() + a * b * b / 2.0;
    let grad = [a.cos() + b * b / 2.0, a * b];
    let hess = [[-a.sin(), b], [b, a]];
    let pt = at(2, vec![a, b, grad[0], grad[1], f]);
    let vectors = (0..2)
        .map(|i| {
            let mut v = vec![0.0; 5];
            v[i] = 1.0;
            v[2] = hess[i][0];
            v[3] = hess[i][1];
            v[4] = grad[i];
            v
        })
        .collect();
    basis(&pt, vectors)
}

/// 1-jet of `f(q) = q³/3` in `n = 1`.
fn one_jet_n1(rng: &mut ChaCha8Rng) -> SubspaceBasis {
    let q = coord(rng);
    let pt = at(1, vec![q, q * q, q * q * q / 3.0]);
    basis(&pt, vec![vec![1.0, 2.0 * q, q * q]])
}

/// `{p₁ = 0}` in `n = 1`.
fn p_zero_n1(rng: &mut ChaCha8Rng) -> SubspaceBasis {
    span(&at(1, vec![coord(rng), 0.0, coord(rng)]), &[0, 2])
}

/// `{q = 0}` in `n = 1`.
fn q_zero_n1(rng: &mut ChaCha8Rng) -> SubspaceBasis {
    span(&at(1, vec![0.0, coord(rng), coord(rng)]), &[1, 2])
}

/// `{p = 0}` in `n = 2`.
fn p_zero_n2(rng: &mut ChaCha8Rng) -> SubspaceBasis {
    span(&at(2, vec![coord(rng), coord(rng), 0.0, 0.0, coord(rng)]), &[0, 1, 4])
}

/// The curve `{q = 0, z = p}` in `n = 1`, tangent `∂_p + ∂_z`.
fn oblique_curve(rng: &mut ChaCha8Rng) -> SubspaceBasis {
    let s = coord(rng);
    basis(&at(1, vec![0.0, s, s]), vec![vec![0.0, 1.0, 1.0]])
}

/// The `q₁`-axis `{q₂ = 0, p = 0, z = 0}` in `n = 2`.
fn q1_axis_n2(rng: &mut ChaCha8Rng) -> SubspaceBasis {
    span(&at(2, vec![coord(rng), 0.0, 0.0, 0.0, 0.0]), &[0])
}

pub fn builtin() -> Vec<Submanifold> {
    use PointPosition::*;
    use SubmanifoldType::*;
    let entry = |name, n, expected, position, sampler: Sampler| Submanifold {
        name,
        chart: contact(n),
        expected,
        position,
        sampler,
    };
    vec![
        entry("zero_section_n1", 1, Legendrian, Horizontal, |r| zero_section(r, 1)),
        entry("zero_section_n2", 2, Legendrian, Horizontal, |r| zero_section(r, 2)),
        entry("zero_section_n3", 3, Legendrian, Horizontal, |r| zero_section(r, 3)),
        entry("one_jet_cubic_n1", 1, Legendrian, Horizontal, one_jet_n1),
        entry("one_jet_n2", 2, Legendrian, Horizontal, one_jet_n2),
        entry("p_zero_n1", 1, Coisotropic, Vertical, p_zero_n1),
        entry("q_zero_n1", 1, Coisotropic, Vertical, q_zero_n1),
        entry("p_zero_n2", 2, Coisotropic, Vertical, p_zero_n2),
        entry("q1_axis_n2", 2, Isotropic, Horizontal, q1_axis_n2),
        entry("oblique_curve_n1", 1, None, Oblique, oblique_curve),
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AgreementEntry {
    pub name: &'static str,
    pub samples: usize,
    pub legendrian: usize,
    pub lagrangian: usize,
    /// Samples where exactly one of "N Legendrian", "N × ℝ Lagrangian" holds.
    pub disagreements: usize,
}

/// Classifies every corpus sample on the contact chart and its lift
/// `N × ℝ` (at a random height) on the symplectified chart.
pub fn legendrian_lagrangian_agreement(seed: u64, samples: usize) -> Result<Vec<AgreementEntry>> {
    let mut rng = sampling::rng(seed);
    builtin()
        .iter()
        .map(|sub| {
            let mut entry = AgreementEntry {
                name: sub.name,
                samples,
                legendrian: 0,
                lagrangian: 0,
                disagreements: 0,
            };
            for _ in 0..samples {
                let b = sub.sample(&mut rng);
                let t = rng.gen_range(-2.0..=2.0);
                let lifted = lift_submanifold(std::slice::from_ref(&b), t)?;
                let leg = classify_tangent_space(&b)? == SubmanifoldType::Legendrian;
                let lag = classify_tangent_space(&lifted[0])? == SubmanifoldType::Lagrangian;
                entry.legendrian += leg as usize;
                entry.lagrangian += lag as usize;
                entry.disagreements += (leg != lag) as usize;
            }
            Ok(entry)
        })
        .collect()
}

/// Dimensions of the contact complements of `Δ = T_xN`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComplementDimensions {
    pub position: PointPosition,
    pub rank: usize,
    pub lambda_dim: usize,
    /// `2n − k` for horizontal points, `2n + 1 − k` otherwise.
    pub expected_lambda_dim: usize,
    pub deta_horizontal_dim: usize,
    /// `2n − k` for horizontal and oblique points, `2n + 1 − k` for
    /// vertical ones.
    pub expected_deta_horizontal_dim: usize,
    /// Equality residual of `Δ^{⊥_{dη}} ∩ ℋ` and `Δ^{⊥_Λ}`, which coincide at
    /// horizontal and vertical points.
    pub equality_residual: Option<f64>,
}

impl ComplementDimensions {
    pub fn holds(&self) -> bool {
        self.lambda_dim == self.expected_lambda_dim
            && self.deta_horizontal_dim == self.expected_deta_horizontal_dim
            && self.equality_residual.is_none_or(|r| r < crate::geometry::SUBSPACE_TOL)
    }
}

pub fn complement_dimensions(b: &SubspaceBasis) -> Result<ComplementDimensions> {
    let n = b.chart().n();
    let k = b.rank();
    let position = classify_point(b)?;
    let lambda = complement_lambda(b)?;
    let deta_h = complement_deta(b)?.intersection(&horizontal_space(b.base())?)?;
    let (expected_lambda_dim, expected_deta_horizontal_dim) = match position {
        PointPosition::Horizontal => (2 * n - k, 2 * n - k),
        PointPosition::Vertical => (2 * n + 1 - k, 2 * n + 1 - k),
        PointPosition::Oblique => (2 * n + 1 - k, 2 * n - k),
    };
    let equality_residual = match position {
        PointPosition::Oblique => None,
        _ => Some(deta_h.equality_residual(&lambda)),
    };
    Ok(ComplementDimensions {
        position,
        rank: k,
        lambda_dim: lambda.rank(),
        expected_lambda_dim,
        deta_horizontal_dim: deta_h.rank(),
        expected_deta_horizontal_dim,
        equality_residual,
    })
}
