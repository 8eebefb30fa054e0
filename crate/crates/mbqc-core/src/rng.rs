//! Deterministic seeded randomness for shot sampling.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// A seeded, reproducible random stream.
///
/// Each shot owns a private stream derived as `run_seed ^ shot_index`, so
/// shots can run in any order or on any thread without changing a single
/// outcome.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    inner: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        RngStream {
            seed,
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Stream for one shot of a multi-shot run.
    pub fn for_shot(run_seed: u64, shot_index: u64) -> Self {
        RngStream::new(run_seed ^ shot_index)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform in `[0, 1)` with 53-bit resolution.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn next_bit(&mut self) -> u8 {
        (self.next_u64() & 1) as u8
    }

    /// Uniform octant index in `0..8` (8 divides 2^64, so masking is unbiased).
    pub fn next_octant(&mut self) -> u8 {
        (self.next_u64() & 7) as u8
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let mut a = RngStream::new(42);
        let mut b = RngStream::new(42);
        for _ in 0..64 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn different_shots_different_streams() {
        let mut a = RngStream::for_shot(42, 0);
        let mut b = RngStream::for_shot(42, 1);
        assert_ne!(a.next_u64(), b.next_u64());
    }

    #[test]
    fn f64_in_unit_interval() {
        let mut rng = RngStream::new(7);
        for _ in 0..1000 {
            let u = rng.next_f64();
            assert!((0.0..1.0).contains(&u));
        }
    }

    #[test]
    fn octants_cover_all_values() {
        let mut rng = RngStream::new(3);
        let mut seen = [false; 8];
        for _ in 0..200 {
            seen[rng.next_octant() as usize] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }
}
