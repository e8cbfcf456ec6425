//! Seeded random number generation.
//!
//! [`RandomEngine`] wraps a ChaCha8 stream cipher generator. ChaCha output is
//! specified independently of platform and word size, and the generator
//! exposes 2^64 independent streams per seed, so every run of a campaign can
//! own a private, replayable stream.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct RandomEngine {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

impl RandomEngine {
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { seed, stream, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Uniform sample in `[0, 1)` built from the top 53 bits of one draw.
    pub fn next_f64(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform sample in `[lo, hi)`; `lo == hi` returns `lo`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> Result<f64> {
        if !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::Argument(format!(
                "uniform interval [{lo}, {hi}) is empty or not finite"
            )));
        }
        Ok(self.uniform_unchecked(lo, hi))
    }

    pub(crate) fn uniform_unchecked(&mut self, lo: f64, hi: f64) -> f64 {
        let u = self.next_f64();
        let v = lo + (hi - lo) * u;
        // rounding can land exactly on `hi` for wide intervals
        if v >= hi && hi > lo {
            lo
        } else {
            v
        }
    }

    /// Uniform index in `0..n`. Panics if `n == 0`.
    pub fn index(&mut self, n: usize) -> usize {
        assert!(n > 0, "index range must be non-empty");
        self.rng.gen_range(0..n)
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.next_f64() < p
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.index(i + 1);
            items.swap(i, j);
        }
    }

    /// Point drawn uniformly from the unit simplex of dimension `m`.
    pub fn simplex_point(&mut self, m: usize) -> Vec<f64> {
        let mut v: Vec<f64> = (0..m).map(|_| -(1.0 - self.next_f64()).ln()).collect();
        let s: f64 = v.iter().sum();
        for e in &mut v {
            *e /= s;
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_interval_returns_endpoint() {
        let mut e = RandomEngine::new(1);
        assert_eq!(e.uniform(0.5, 0.5).unwrap(), 0.5);
    }

    #[test]
    fn reversed_interval_is_rejected() {
        let mut e = RandomEngine::new(1);
        assert!(matches!(e.uniform(1.0, 0.0), Err(Error::Argument(_))));
        assert!(e.uniform(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn same_seed_replays() {
        let a = RandomEngine::new(42).uniform(0.0, 1.0).unwrap();
        let b = RandomEngine::new(42).uniform(0.0, 1.0).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
        assert!((0.0..1.0).contains(&a));
    }

    #[test]
    fn streams_are_distinct() {
        let mut a = RandomEngine::with_stream(7, 0);
        let mut b = RandomEngine::with_stream(7, 1);
        let xs: Vec<u64> = (0..4).map(|_| a.next_f64().to_bits()).collect();
        let ys: Vec<u64> = (0..4).map(|_| b.next_f64().to_bits()).collect();
        assert_ne!(xs, ys);
    }

    #[test]
    fn mean_of_many_draws_is_near_half() {
        let mut e = RandomEngine::new(3);
        let n = 100_000;
        let mean: f64 = (0..n).map(|_| e.uniform(0.0, 1.0).unwrap()).sum::<f64>() / n as f64;
        assert!((mean - 0.5).abs() < 0.01, "mean {mean}");
    }

    #[test]
    fn simplex_points_sum_to_one() {
        let mut e = RandomEngine::new(9);
        for m in 2..7 {
            let p = e.simplex_point(m);
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(p.iter().all(|&v| v >= 0.0));
        }
    }
}
