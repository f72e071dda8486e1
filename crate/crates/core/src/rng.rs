//! Counter-based Gaussian streams.
//!
//! A stream is addressed by `(seed, stream_id)`. Monte Carlo code uses one
//! stream per sample, so the numbers a sample sees never depend on which
//! thread ran it or what ran before.

use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::math::{ln, sincos, sqrt, PI};

const TWO_POW_M53: f64 = 1.0 / (1u64 << 53) as f64;

/// A deterministic stream of uniforms and standard normals.
#[derive(Clone, Debug)]
pub struct RngStream {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        RngStream { rng, spare: None }
    }

    /// Uniform on `(0, 1]` with 53 random bits.
    #[inline]
    pub fn next_uniform(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) + 1) as f64 * TWO_POW_M53
    }

    /// Standard normal by Box–Muller; normals come in pairs, so every pair
    /// of calls consumes exactly two 64-bit words.
    #[inline]
    pub fn next_normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let r = sqrt(-2.0 * ln(self.next_uniform()));
        let (s, c) = sincos(2.0 * PI * self.next_uniform());
        self.spare = Some(r * s);
        r * c
    }

    pub fn fill_normals(&mut self, out: &mut [f64]) {
        for x in out {
            *x = self.next_normal();
        }
    }
}

/// `count` i.i.d. standard normals from `stream`.
pub fn sample_std_normal_vec(stream: &mut RngStream, count: usize) -> Vec<f64> {
    (0..count).map(|_| stream.next_normal()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moments_of_a_million_draws() {
        let mut s = RngStream::new(7, 0);
        let n = 1_000_000;
        let v = sample_std_normal_vec(&mut s, n);
        let mean = v.iter().sum::<f64>() / n as f64;
        let var = v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64;
        assert!(mean.abs() < 4.0 / (n as f64).sqrt(), "{mean}");
        assert!((var - 1.0).abs() < 0.01, "{var}");
    }

    #[test]
    fn equal_addresses_give_equal_bits() {
        let a = sample_std_normal_vec(&mut RngStream::new(3, 11), 1001);
        let b = sample_std_normal_vec(&mut RngStream::new(3, 11), 1001);
        assert!(a.iter().zip(&b).all(|(x, y)| x.to_bits() == y.to_bits()));
        let c = sample_std_normal_vec(&mut RngStream::new(3, 12), 1001);
        let d = sample_std_normal_vec(&mut RngStream::new(4, 11), 1001);
        assert_ne!(a, c);
        assert_ne!(a, d);
    }

    #[test]
    fn uniforms_stay_in_half_open_interval() {
        let mut s = RngStream::new(0, 0);
        for _ in 0..100_000 {
            let u = s.next_uniform();
            assert!(u > 0.0 && u <= 1.0);
        }
    }
}
