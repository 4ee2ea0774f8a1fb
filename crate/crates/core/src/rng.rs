//! Portable seeded streams for instance generation.
//!
//! Each matrix draws from its own ChaCha8 stream keyed by `(seed, stream)`, so
//! adding a matrix never perturbs the others.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Stream {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl Stream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Stream { rng, spare: None }
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Standard normal via Box–Muller.
    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        // 1 − U lies in (0, 1], keeping the log finite
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (2.0 * std::f64::consts::PI * u2).sin_cos();
        self.spare = Some(r * s);
        r * c
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }
}

/// Stream ids used by the generators.
pub mod streams {
    pub const A: u64 = 1;
    pub const B: u64 = 2;
    pub const AUX: u64 = 3;
    pub const SOLUTION: u64 = 4;
    pub const SAMPLING: u64 = 5;
}
