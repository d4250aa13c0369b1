// SPDX-License-Identifier: Apache-2.0

//! Seeded randomness shared by the generators and the community search.

use rand::seq::index;
use rand::{Rng as _, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StochasticError {
    #[error("geometric mean must be finite and non-negative, got {0}")]
    InvalidMean(f64),
}

/// A reproducible random stream: the same seed always yields the same
/// sequence of draws.
#[derive(Debug, Clone)]
pub struct SeededRng {
    seed: u64,
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Stream for realization `index` of an ensemble started from `base_seed`.
    pub fn for_realization(base_seed: u64, index: u64) -> Self {
        Self::new(realization_seed(base_seed, index))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of failures before the first success, with the success
    /// probability chosen so that the expectation equals `mean`.
    pub fn geometric_count(&mut self, mean: f64) -> Result<u64, StochasticError> {
        if !(mean.is_finite() && mean >= 0.0) {
            return Err(StochasticError::InvalidMean(mean));
        }
        if mean == 0.0 {
            return Ok(0);
        }
        let success = 1.0 / (1.0 + mean);
        let dist = Geometric::new(success).map_err(|_| StochasticError::InvalidMean(mean))?;
        Ok(dist.sample(&mut self.inner))
    }

    /// `min(count, candidates.len())` distinct elements chosen uniformly
    /// without replacement.
    pub fn sample_subset<T: Copy>(&mut self, candidates: &[T], count: usize) -> Vec<T> {
        let amount = count.min(candidates.len());
        if amount == 0 {
            return Vec::new();
        }
        if amount == candidates.len() {
            return candidates.to_vec();
        }
        index::sample(&mut self.inner, candidates.len(), amount)
            .into_iter()
            .map(|i| candidates[i])
            .collect()
    }

    /// Uniform integer in `0..bound`. `bound` must be positive.
    pub fn below(&mut self, bound: usize) -> usize {
        self.inner.random_range(0..bound)
    }

    /// `true` with probability `prob`, clamped to `[0, 1]`.
    pub fn chance(&mut self, prob: f64) -> bool {
        if prob >= 1.0 {
            true
        } else if prob <= 0.0 {
            false
        } else {
            self.inner.random_bool(prob)
        }
    }
}

impl RngCore for SeededRng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Seed of realization `index`, depending only on `(base_seed, index)` so
/// that ensembles give the same results regardless of execution order.
pub fn realization_seed(base_seed: u64, index: u64) -> u64 {
    splitmix64(base_seed ^ splitmix64(index))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_mean_is_degenerate() {
        let mut rng = SeededRng::new(1);
        assert!((0..1000).all(|_| rng.geometric_count(0.0) == Ok(0)));
    }

    #[test]
    fn negative_or_nan_mean_is_rejected() {
        let mut rng = SeededRng::new(1);
        assert!(rng.geometric_count(-0.5).is_err());
        assert!(rng.geometric_count(f64::NAN).is_err());
        assert!(rng.geometric_count(f64::INFINITY).is_err());
    }

    #[test]
    fn geometric_mean_matches_closed_form() {
        let mean = 0.3 / 0.7;
        let mut rng = SeededRng::new(7);
        let draws = 1_000_000;
        let total: u64 = (0..draws).map(|_| rng.geometric_count(mean).unwrap()).sum();
        let empirical = total as f64 / draws as f64;
        assert!((empirical - mean).abs() < 0.01, "{empirical}");
    }

    #[test]
    fn geometric_zero_mass_matches_pmf() {
        // mean 3 => success 1/4 => P(X = 0) = 1/4
        let mut rng = SeededRng::new(11);
        let draws = 1_000_000;
        let zeros = (0..draws)
            .filter(|_| rng.geometric_count(3.0).unwrap() == 0)
            .count();
        let freq = zeros as f64 / draws as f64;
        assert!((freq - 0.25).abs() < 0.005, "{freq}");
    }

    #[test]
    fn subset_caps_at_available() {
        let mut rng = SeededRng::new(3);
        let mut all = rng.sample_subset(&['a', 'b', 'c'], 5);
        all.sort();
        assert_eq!(all, vec!['a', 'b', 'c']);
        assert!(rng.sample_subset(&['a', 'b', 'c'], 0).is_empty());
        assert!(rng.sample_subset::<u8>(&[], 4).is_empty());
    }

    #[test]
    fn subset_is_uniform() {
        let mut rng = SeededRng::new(5);
        let candidates: Vec<usize> = (0..10).collect();
        let trials = 100_000;
        let mut hits = [0usize; 10];
        for _ in 0..trials {
            for x in rng.sample_subset(&candidates, 3) {
                hits[x] += 1;
            }
        }
        for h in hits {
            let freq = h as f64 / trials as f64;
            assert!((freq - 0.3).abs() < 0.01, "{freq}");
        }
    }

    #[test]
    fn streams_are_reproducible() {
        let draw = |seed| {
            let mut rng = SeededRng::new(seed);
            (0..100)
                .map(|_| rng.geometric_count(1.5).unwrap())
                .collect::<Vec<_>>()
        };
        assert_eq!(draw(42), draw(42));
        assert_ne!(draw(42), draw(43));
        assert_ne!(realization_seed(1, 0), realization_seed(1, 1));
        assert_ne!(realization_seed(0, 1), realization_seed(1, 0));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn subsets_are_distinct_candidates(
                seed: u64,
                len in 0usize..50,
                count in 0usize..60,
            ) {
                let candidates: Vec<usize> = (0..len).map(|i| i * 3 + 1).collect();
                let mut rng = SeededRng::new(seed);
                let mut s = rng.sample_subset(&candidates, count);
                prop_assert_eq!(s.len(), count.min(len));
                s.sort_unstable();
                let before = s.len();
                s.dedup();
                prop_assert_eq!(s.len(), before);
                prop_assert!(s.iter().all(|x| candidates.contains(x)));
            }
        }
    }
}
