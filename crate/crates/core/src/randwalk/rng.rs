//! Reproducible random streams.
//!
//! A stream is a ChaCha8 keystream. The 256-bit key is four successive
//! splitmix64 outputs started from the root seed, and the stream id selects
//! the ChaCha stream (nonce). Uniforms take the top 53 bits of a `u64`.
//! Gaussians use the Box–Muller transform
//! `√(−2 ln u₁)·(cos 2πu₂, sin 2πu₂)` with `u₁ ∈ (0,1]`, and the second
//! variate of each pair is returned by the next call.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::numkit::splitmix64;

#[derive(Debug, Clone)]
pub struct RngStream {
    root_seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl RngStream {
    pub fn new(root_seed: u64, stream_id: u64) -> Self {
        let mut state = root_seed;
        let mut key = [0u8; 32];
        for chunk in key.chunks_exact_mut(8) {
            chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
        }
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(stream_id);
        Self {
            root_seed,
            stream_id,
            rng,
            spare: None,
        }
    }

    pub fn root_seed(&self) -> u64 {
        self.root_seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Independent sub-stream, e.g. one per Monte Carlo trial.
    pub fn child(&self, id: u64) -> RngStream {
        let mut state = self.root_seed ^ self.stream_id.wrapping_mul(0xD1B5_4A32_D192_ED03);
        RngStream::new(splitmix64(&mut state), id)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `(0, 1]`.
    pub fn uniform_open(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `0..bound` (rejection sampling, no modulo bias).
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "bound must be positive");
        let zone = u64::MAX - (u64::MAX % bound);
        loop {
            let x = self.next_u64();
            if x < zone {
                return x % bound;
            }
        }
    }

    pub fn coin(&mut self) -> bool {
        self.next_u64() >> 63 == 1
    }

    pub fn gaussian(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let r = (-2.0 * self.uniform_open().ln()).sqrt();
        let phi = std::f64::consts::TAU * self.uniform();
        self.spare = Some(r * phi.sin());
        r * phi.cos()
    }

    pub fn gaussian_vec(&mut self, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.gaussian()).collect()
    }

    /// Exponential with the given rate.
    pub fn exponential(&mut self, rate: f64) -> f64 {
        -self.uniform_open().ln() / rate
    }

    /// Uniform on the unit sphere `𝕊ⁿ⁻¹`.
    pub fn unit_vector(&mut self, n: usize) -> Vec<f64> {
        loop {
            let g = self.gaussian_vec(n);
            let r = crate::numkit::norm(&g);
            if r > 1e-300 {
                return g.into_iter().map(|x| x / r).collect();
            }
        }
    }

    /// Uniform in the unit ball: Gaussian direction, radius `U^{1/n}`.
    pub fn ball_point(&mut self, n: usize) -> Vec<f64> {
        let dir = self.unit_vector(n);
        let r = self.uniform().powf(1.0 / n as f64);
        dir.into_iter().map(|x| x * r).collect()
    }
}
