//! Dense helpers over `Vec<f64>` vectors: SVD-based spans and null spaces
//! (faer), LU solves (nalgebra).

use faer::Mat;
use nalgebra::{DMatrix, DVector};

/// Singular values below `REL_RANK_TOL * max(1, σ_max)` count as zero.
pub(crate) const REL_RANK_TOL: f64 = 1e-10;

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn max_abs(a: &[f64]) -> f64 {
    a.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

/// Full SVD `A = U Σ Vᵀ` with `Σ` given as its `min(rows, cols)` diagonal.
///
/// nalgebra's bidiagonal SVD can return inaccurate singular vectors for
/// rank-deficient inputs, so decompositions go through faer.
struct Svd {
    u: Mat<f64>,
    s: Vec<f64>,
    v: Mat<f64>,
}

fn svd(a: &Mat<f64>) -> Svd {
    let d = a.svd().expect("SVD converges on finite input");
    let k = a.nrows().min(a.ncols());
    let diag = d.S();
    Svd {
        u: d.U().to_owned(),
        s: (0..k).map(|i| diag[i]).collect(),
        v: d.V().to_owned(),
    }
}

fn columns(vectors: &[Vec<f64>], dim: usize) -> Mat<f64> {
    Mat::from_fn(dim, vectors.len(), |i, j| vectors[j][i])
}

fn threshold(singular: &[f64]) -> f64 {
    REL_RANK_TOL * singular.iter().fold(1.0_f64, |m, s| m.max(*s))
}

/// Orthonormal basis of `span(vectors)`, dropping directions whose singular
/// value falls below the rank tolerance.
pub(crate) fn orthonormalize(vectors: &[Vec<f64>], dim: usize) -> Vec<Vec<f64>> {
    if vectors.is_empty() || dim == 0 {
        return Vec::new();
    }
    let d = svd(&columns(vectors, dim));
    let cut = threshold(&d.s);
    (0..d.s.len())
        .filter(|&j| d.s[j] > cut)
        .map(|j| (0..dim).map(|i| d.u[(i, j)]).collect())
        .collect()
}

/// Orthonormal basis of `{x : r·x = 0 for every row r}`.
pub(crate) fn null_space(rows: &[Vec<f64>], dim: usize) -> Vec<Vec<f64>> {
    if dim == 0 {
        return Vec::new();
    }
    if rows.is_empty() {
        return (0..dim).map(|i| unit(dim, i)).collect();
    }
    let a = Mat::from_fn(rows.len(), dim, |i, j| rows[i][j]);
    let d = svd(&a);
    let cut = threshold(&d.s);
    (0..dim)
        .filter(|&j| j >= d.s.len() || d.s[j] <= cut)
        .map(|j| (0..dim).map(|i| d.v[(i, j)]).collect())
        .collect()
}

/// Smallest singular value of the column-normalized matrix `[v₁ … v_m]`.
pub(crate) fn min_normalized_singular(vectors: &[Vec<f64>], dim: usize) -> f64 {
    if vectors.is_empty() {
        return f64::INFINITY;
    }
    if vectors.len() > dim {
        return 0.0;
    }
    let normalized: Vec<Vec<f64>> = vectors
        .iter()
        .map(|v| {
            let n = norm(v);
            if n == 0.0 {
                v.clone()
            } else {
                v.iter().map(|x| x / n).collect()
            }
        })
        .collect();
    svd(&columns(&normalized, dim))
        .s
        .iter()
        .fold(f64::INFINITY, |m, s| m.min(*s))
}

/// Relative distance of `v` from the span of the orthonormal set `onb`.
pub(crate) fn projection_residual(v: &[f64], onb: &[Vec<f64>]) -> f64 {
    let n = norm(v);
    if n == 0.0 {
        return 0.0;
    }
    let mut r = v.to_vec();
    for e in onb {
        let c = dot(&r, e);
        r.iter_mut().zip(e).for_each(|(ri, ei)| *ri -= c * ei);
    }
    norm(&r) / n
}

/// Largest projection residual of `inner` vectors onto `span(outer)`.
pub(crate) fn containment_residual(outer: &[Vec<f64>], inner: &[Vec<f64>], dim: usize) -> f64 {
    let onb = orthonormalize(outer, dim);
    inner
        .iter()
        .map(|v| projection_residual(v, &onb))
        .fold(0.0, f64::max)
}

pub(crate) fn rank(vectors: &[Vec<f64>], dim: usize) -> usize {
    orthonormalize(vectors, dim).len()
}

pub(crate) fn unit(dim: usize, i: usize) -> Vec<f64> {
    let mut e = vec![0.0; dim];
    e[i] = 1.0;
    e
}

/// Solves `A x = b` by LU; returns the solution and the residual
/// `‖Ax − b‖ / max(1, ‖b‖)`.
pub(crate) fn solve(a: &DMatrix<f64>, b: &[f64]) -> Option<(Vec<f64>, f64)> {
    let rhs = DVector::from_column_slice(b);
    let x = a.clone().lu().solve(&rhs)?;
    let residual = (a * &x - &rhs).norm() / rhs.norm().max(1.0);
    Some((x.iter().copied().collect(), residual))
}

/// Least-squares solution of `A x ≈ b` through the SVD pseudo-inverse;
/// returns the solution and the absolute residual `‖Ax − b‖`.
pub(crate) fn least_squares(a: &DMatrix<f64>, b: &[f64]) -> (Vec<f64>, f64) {
    let (m, n) = a.shape();
    let d = svd(&Mat::from_fn(m, n, |i, j| a[(i, j)]));
    let cut = threshold(&d.s);
    let mut x = vec![0.0; n];
    for (k, &s) in d.s.iter().enumerate() {
        if s > cut {
            let c = (0..m).map(|i| d.u[(i, k)] * b[i]).sum::<f64>() / s;
            for (j, xj) in x.iter_mut().enumerate() {
                *xj += c * d.v[(j, k)];
            }
        }
    }
    let residual = (a * DVector::from_column_slice(&x) - DVector::from_column_slice(b)).norm();
    (x, residual)
}
