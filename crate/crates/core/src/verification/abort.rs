use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::empirical::collect_empirical_par;
use crate::error::Result;
use crate::harness::bounds::simulator_deviation;
use crate::oracle::Params;
use crate::simulation::{cp_co_bar, prefix_ro_bar, LazyHashState, Step};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AbortReport {
    pub params: Params,
    pub q_h: u64,
    pub q_sc: u64,
    pub runs: u64,
    pub aborts: u64,
    pub rate: f64,
    /// Standard error of `rate`.
    pub sigma: f64,
    /// Deviation bound at `q = q_h + 2 q_sc`.
    pub bound: f64,
    pub seed: u64,
}

/// One random script: `q_h` hash queries on uniform inputs interleaved with
/// `q_sc` CP-CO queries on uniform prefix pairs. True when it aborted.
pub fn random_script_aborts(params: Params, q_h: u64, q_sc: u64, rng: &mut ChaCha8Rng) -> Result<bool> {
    let mut state = LazyHashState::new(params);
    for i in 0..q_h.max(q_sc) {
        if i < q_h {
            let x = rng.random_range(0..params.inputs()) as u32;
            if prefix_ro_bar(&mut state, x, rng)? == Step::Abort {
                return Ok(true);
            }
        }
        if i < q_sc {
            let r = rng.random_range(0..params.prefixes()) as u32;
            let r2 = rng.random_range(0..params.prefixes()) as u32;
            if cp_co_bar(&mut state, r, r2, rng)?.is_abort() {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Abort frequency of the simplified simulators over `runs` random scripts.
pub fn abort_rate_experiment(params: Params, q_h: u64, q_sc: u64, runs: u64, seed: u64) -> Result<AbortReport> {
    let e = collect_empirical_par(|rng| random_script_aborts(params, q_h, q_sc, rng), runs, seed)?;
    let aborts = e.count(&true);
    let rate = aborts as f64 / runs as f64;
    Ok(AbortReport {
        params,
        q_h,
        q_sc,
        runs,
        aborts,
        rate,
        sigma: (rate * (1.0 - rate) / runs as f64).sqrt(),
        bound: simulator_deviation(q_h + 2 * q_sc, params.ell, params.k)?,
        seed,
    })
}
