//! Seeded randomness shared by estimators, tests and the CLI.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::Vector;

pub type Rng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point of the unit sphere in `R^n`.
pub fn unit_vector(rng: &mut Rng, n: usize) -> Vector {
    loop {
        let v = Vector::from_fn(n, |_, _| StandardNormal.sample(rng));
        let norm = v.norm();
        if norm > 1e-12 {
            return v / norm;
        }
    }
}

/// Uniform point of the ball of radius `r` in `R^n`.
pub fn in_ball(rng: &mut Rng, n: usize, r: f64) -> Vector {
    let u: f64 = rng.random();
    unit_vector(rng, n) * (r * u.powf(1.0 / n as f64))
}

/// `n` i.i.d. standard normal coordinates.
pub fn gaussian(rng: &mut Rng, n: usize) -> Vector {
    Vector::from_fn(n, |_, _| StandardNormal.sample(rng))
}
