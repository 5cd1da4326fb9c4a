//! Seeded random sampling for property sweeps.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub const DEFAULT_SEED: u64 = 0x5EED_0007;

pub type SweepRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SweepRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn standard_normal_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DVector<f64> {
    DVector::from_iterator(n, (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)))
}

/// Uniform on the unit sphere `S^{n-1}`.
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DVector<f64> {
    loop {
        let v = standard_normal_vector(rng, n);
        let norm = v.norm();
        if norm > 1e-8 {
            return v / norm;
        }
    }
}

/// Uniform in the open unit ball of `R^n`, shrunk by `max_radius`.
pub fn ball_vector<R: Rng + ?Sized>(rng: &mut R, n: usize, max_radius: f64) -> DVector<f64> {
    let dir = unit_vector(rng, n);
    let u: f64 = rng.random();
    dir * (max_radius * u.powf(1.0 / n as f64))
}
