//! Deterministic random sampling of points, vectors and covectors.
//!
//! Every randomized check draws from a `ChaCha8Rng` seeded explicitly, so
//! the same seed reproduces the same samples on every platform.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::geometry::{Chart, Covector, Point, TangentVector};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Derives an independent seed for sub-batch `index` of a run seeded with
/// `seed` (SplitMix64 finalizer).
pub fn split_seed(seed: u64, index: u64) -> u64 {
    let mut x = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

pub fn uniform_vec<R: Rng + ?Sized>(rng: &mut R, dim: usize, radius: f64) -> Vec<f64> {
    (0..dim).map(|_| rng.gen_range(-radius..=radius)).collect()
}

/// Uniformly distributed unit vector in `ℝ^dim` (rejection from the cube).
pub fn unit_vec<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vec<f64> {
    loop {
        let v = uniform_vec(rng, dim, 1.0);
        let r2: f64 = v.iter().map(|x| x * x).sum();
        if r2 > 1e-4 && r2 <= 1.0 {
            let r = r2.sqrt();
            return v.into_iter().map(|x| x / r).collect();
        }
    }
}

/// Point with coordinates uniform in `[−radius, radius]`.
pub fn point<R: Rng + ?Sized>(rng: &mut R, chart: Chart, radius: f64) -> Point {
    Point::new(chart, uniform_vec(rng, chart.dim(), radius)).expect("finite sample")
}

pub fn vector<R: Rng + ?Sized>(rng: &mut R, base: &Point) -> TangentVector {
    TangentVector::new(base, uniform_vec(rng, base.chart().dim(), 1.0)).expect("finite sample")
}

pub fn covector<R: Rng + ?Sized>(rng: &mut R, base: &Point) -> Covector {
    Covector::new(base, uniform_vec(rng, base.chart().dim(), 1.0)).expect("finite sample")
}
