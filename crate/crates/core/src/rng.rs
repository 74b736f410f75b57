//! Seeded random streams.
//!
//! Algorithm: ChaCha with 12 rounds (`rand_chacha::ChaCha12Rng`, stream 0),
//! whose output is fixed by its reference definition and identical on every
//! platform. Uniforms take the top 53 bits of `next_u64`; standard normals use
//! the Marsaglia polar method, caching the second variate of each pair.

use rand_chacha::ChaCha12Rng;
use rand_core::{RngCore, SeedableRng};

/// Identifier recorded alongside experiment outputs.
pub const RNG_ALGORITHM: &str = "chacha12-polar-v1";

#[derive(Debug, Clone)]
pub struct Rng {
    inner: ChaCha12Rng,
    spare: Option<f64>,
    seed: u64,
}

impl Rng {
    pub fn seed_from_u64(seed: u64) -> Self {
        let mut key = [0u8; 32];
        let mut state = seed;
        for chunk in key.chunks_exact_mut(8) {
            state = splitmix64(state);
            chunk.copy_from_slice(&state.to_le_bytes());
        }
        Rng { inner: ChaCha12Rng::from_seed(key), spare: None, seed }
    }

    /// Seed this stream was created from.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform on `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn standard_normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        loop {
            let u = 2.0 * self.uniform() - 1.0;
            let v = 2.0 * self.uniform() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let k = libm::sqrt(-2.0 * libm::log(s) / s);
                self.spare = Some(v * k);
                return u * k;
            }
        }
    }

    pub fn fill_normal(&mut self, out: &mut [f64]) {
        for x in out {
            *x = self.standard_normal();
        }
    }
}

/// SplitMix64 finalizer, used both to expand seeds and to hash trial indices.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-task seed: `base_seed ⊕ splitmix64(index)`.
pub fn derive_seed(base_seed: u64, index: u64) -> u64 {
    base_seed ^ splitmix64(index)
}
