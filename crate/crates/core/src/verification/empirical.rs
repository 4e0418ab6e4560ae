use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::num::Real;
use crate::simulation::{statistical_distance, Distribution};

/// Tally of observed outcomes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmpiricalDistribution<K: Ord> {
    counts: BTreeMap<K, u64>,
    total: u64,
}

impl<K: Ord> Default for EmpiricalDistribution<K> {
    fn default() -> Self {
        Self { counts: BTreeMap::new(), total: 0 }
    }
}

impl<K: Ord + Clone> EmpiricalDistribution<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, outcome: K) {
        *self.counts.entry(outcome).or_insert(0) += 1;
        self.total += 1;
    }

    pub fn merge(&mut self, other: Self) {
        for (k, c) in other.counts {
            *self.counts.entry(k).or_insert(0) += c;
        }
        self.total += other.total;
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn count(&self, outcome: &K) -> u64 {
        self.counts.get(outcome).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &BTreeMap<K, u64> {
        &self.counts
    }

    /// Number of distinct outcomes observed.
    pub fn cells(&self) -> usize {
        self.counts.len()
    }

    pub fn to_distribution<F: Real>(&self) -> Result<Distribution<K, F>> {
        if self.total == 0 {
            return Err(Error::NoSamples);
        }
        let n = F::count(self.total);
        Ok(Distribution::from_parts_unchecked(
            self.counts.iter().map(|(k, &c)| (k.clone(), F::count(c) / n)).collect(),
        ))
    }

    /// Total variation distance to another tally.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        statistical_distance(&self.to_distribution::<f64>()?, &other.to_distribution::<f64>()?)
    }

    /// Expected distance between two independent tallies of this size drawn
    /// from the same distribution, estimated from the pooled frequencies.
    pub fn noise_floor(&self, other: &Self) -> f64 {
        let pooled = (self.total + other.total) as f64;
        let n = self.total.min(other.total) as f64;
        let mut keys: Vec<&K> = self.counts.keys().chain(other.counts.keys()).collect();
        keys.sort();
        keys.dedup();
        keys.into_iter()
            .map(|k| {
                let p = (self.count(k) + other.count(k)) as f64 / pooled;
                (p * (1.0 - p) / (std::f64::consts::PI * n)).sqrt()
            })
            .sum()
    }
}

/// Tallies `n` draws of `sampler` from one seeded stream.
pub fn collect_empirical<K, S>(mut sampler: S, n: u64, seed: u64) -> Result<EmpiricalDistribution<K>>
where
    K: Ord + Clone,
    S: FnMut(&mut ChaCha8Rng) -> Result<K>,
{
    if n == 0 {
        return Err(Error::NoSamples);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut e = EmpiricalDistribution::new();
    for _ in 0..n {
        e.add(sampler(&mut rng)?);
    }
    Ok(e)
}

/// Samples per independently seeded chunk of [`collect_empirical_par`].
pub const CHUNK: u64 = 1 << 14;

/// Parallel tally: chunk `i` draws from the stream seeded by
/// `chunk_seed(seed, i)`, so the result does not depend on the worker count.
pub fn collect_empirical_par<K, S>(sampler: S, n: u64, seed: u64) -> Result<EmpiricalDistribution<K>>
where
    K: Ord + Clone + Send,
    S: Fn(&mut ChaCha8Rng) -> Result<K> + Sync,
{
    if n == 0 {
        return Err(Error::NoSamples);
    }
    let chunks = n.div_ceil(CHUNK);
    let parts: Vec<Result<EmpiricalDistribution<K>>> = (0..chunks)
        .into_par_iter()
        .map(|i| {
            let len = CHUNK.min(n - i * CHUNK);
            let mut rng = ChaCha8Rng::seed_from_u64(chunk_seed(seed, i));
            let mut e = EmpiricalDistribution::new();
            for _ in 0..len {
                e.add(sampler(&mut rng)?);
            }
            Ok(e)
        })
        .collect();
    let mut total = EmpiricalDistribution::new();
    for part in parts {
        total.merge(part?);
    }
    Ok(total)
}

/// SplitMix64 mix of a base seed and an index.
pub fn chunk_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
