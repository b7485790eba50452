#![allow(dead_code)]

use darboux_core::hamiltonian::Polynomial;
use darboux_core::{Chart, ScalarField};
use rand::Rng;

/// Random polynomial of total degree ≤ 3 with `terms` monomials and
/// coefficients in `[−1, 1]`.
pub fn random_polynomial<R: Rng>(rng: &mut R, chart: Chart, terms: usize) -> ScalarField {
    let dim = chart.dim();
    let terms = (0..terms)
        .map(|_| {
            let mut e = vec![0u32; dim];
            for _ in 0..rng.gen_range(1..=3) {
                e[rng.gen_range(0..dim)] += 1;
            }
            (rng.gen_range(-1.0..=1.0), e)
        })
        .collect();
    Polynomial { terms }.field(chart).unwrap()
}

/// Random polynomial that always depends on `z` through `c·z·(1 + x_j)`.
pub fn random_contact_polynomial<R: Rng>(rng: &mut R, chart: Chart, terms: usize) -> ScalarField {
    let dim = chart.dim();
    let z = chart.z_index().unwrap();
    let base = random_polynomial(rng, chart, terms);
    let mut e1 = vec![0u32; dim];
    e1[z] = 1;
    let mut e2 = e1.clone();
    e2[rng.gen_range(0..dim)] += 1;
    let c = rng.gen_range(0.2..=1.0);
    let extra = Polynomial {
        terms: vec![(c, e1), (c, e2)],
    }
    .field(chart)
    .unwrap();
    base + extra
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
