use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{Binomial, DiscreteCDF};

use super::chisq::SIGNIFICANCE;
use super::empirical::chunk_seed;
use crate::error::{Error, Result};
use crate::harness::bounds::max_load_threshold;
use crate::oracle::{FunctionTable, Input, Params};

/// Preimage counts `n_{y,r}` of one prefix class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoadProfile {
    pub r: u32,
    pub counts: Vec<u64>,
    pub threshold: f64,
}

impl LoadProfile {
    pub fn from_table(table: &FunctionTable, r: u32) -> Result<Self> {
        let p = table.params();
        p.check_prefix(r)?;
        let mut counts = vec![0u64; p.outputs() as usize];
        for m in 0..p.messages() as u32 {
            counts[table.eval(Input::new(m, r)) as usize] += 1;
        }
        Ok(Self { r, counts, threshold: max_load_threshold(p.ell, p.k)? })
    }

    pub fn max_load(&self) -> u64 {
        self.counts.iter().copied().max().unwrap_or(0)
    }

    /// Some value has more than `L` preimages in the class.
    pub fn is_bad(&self) -> bool {
        self.max_load() as f64 > self.threshold
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LoadExperiment {
    pub tables: u64,
    pub bad: u64,
    pub frequency: f64,
    /// `1/#Y²`
    pub bound: f64,
    pub threshold: f64,
    pub largest_load: u64,
    /// `Pr[X ≥ bad]` for `X ~ B(tables, bound)`.
    pub p_value: f64,
    pub reject: bool,
}

/// Frequency of an overloaded class `r` over fresh random tables, with a
/// one-sided binomial test of "rate ≤ 1/#Y²".
pub fn max_load_experiment(params: Params, r: u32, tables: u64, seed: u64) -> Result<LoadExperiment> {
    if tables == 0 {
        return Err(Error::NoSamples);
    }
    params.check_prefix(r)?;
    let loads: Vec<Result<(bool, u64)>> = (0..tables)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(chunk_seed(seed, i));
            let table = FunctionTable::random(params, &mut rng)?;
            let profile = LoadProfile::from_table(&table, r)?;
            Ok((profile.is_bad(), profile.max_load()))
        })
        .collect();
    let (mut bad, mut largest_load) = (0, 0);
    for l in loads {
        let (is_bad, load) = l?;
        bad += is_bad as u64;
        largest_load = largest_load.max(load);
    }
    let y = params.outputs() as f64;
    let bound = 1.0 / (y * y);
    let p_value = if bad == 0 {
        1.0
    } else {
        Binomial::new(bound, tables).map_err(|e| Error::InvalidParams(e.to_string()))?.sf(bad - 1)
    };
    Ok(LoadExperiment {
        tables,
        bad,
        frequency: bad as f64 / tables as f64,
        bound,
        threshold: max_load_threshold(params.ell, params.k)?,
        largest_load,
        p_value,
        reject: p_value < SIGNIFICANCE,
    })
}
