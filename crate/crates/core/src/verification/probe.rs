use std::collections::HashSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::empirical::collect_empirical_par;
use crate::error::{Error, Result};
use crate::harness::bounds::uniformity_distance;
use crate::oracle::{FunctionTable, Input, OracleAnswer, Params};
use crate::simulation::{statistical_distance, Distribution};

/// Fixed adversary strategies for the uniformity probe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProbeScript {
    /// Makes no queries and outputs `x`.
    Ignoring { x: u32 },
    /// Asks CP-CO on `(0, 0)` `rounds` times, then outputs the smallest
    /// message of class 0 that no answer revealed.
    CollisionSeeking { rounds: u32 },
    /// Queries the random oracle on `x` and outputs it; never fresh.
    Replay { x: u32 },
}

impl ProbeScript {
    /// `(q_h, q_sc)`
    pub fn queries(&self) -> (u64, u64) {
        match *self {
            ProbeScript::Ignoring { .. } => (0, 0),
            ProbeScript::CollisionSeeking { rounds } => (0, rounds as u64),
            ProbeScript::Replay { .. } => (1, 0),
        }
    }

    /// Plays against `table`, returning the chosen point and whether some oracle answered it.
    fn play<R: Rng + ?Sized>(&self, table: &FunctionTable, rng: &mut R) -> Result<(u32, bool)> {
        let p = table.params();
        let mut answered = HashSet::new();
        let x = match *self {
            ProbeScript::Ignoring { x } => x,
            ProbeScript::Replay { x } => {
                table.ro_query(x)?;
                answered.insert(x);
                x
            }
            ProbeScript::CollisionSeeking { rounds } => {
                for _ in 0..rounds {
                    if let OracleAnswer::Pair(a, b) = table.cp_co_query(0, 0, rng)? {
                        answered.insert(p.join(a));
                        answered.insert(p.join(b));
                    }
                }
                (0..p.messages() as u32)
                    .map(|m| p.join(Input::new(m, 0)))
                    .find(|x| !answered.contains(x))
                    .ok_or(Error::Precondition("class 0 fully revealed"))?
            }
        };
        Ok((x, answered.contains(&x)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub samples: u64,
    pub q: u64,
    pub delta: f64,
    pub bound: f64,
}

/// Distance between the hash of the script's chosen point and uniform,
/// over fresh random functions.
pub fn uniformity_probe(script: ProbeScript, params: Params, samples: u64, seed: u64) -> Result<ProbeReport> {
    let e = collect_empirical_par(
        |rng| {
            let table = FunctionTable::random(params, rng)?;
            let (x, seen) = script.play(&table, rng)?;
            if seen {
                return Err(Error::FreshnessViolation);
            }
            Ok(table.ro_query(x)? as u64)
        },
        samples,
        seed,
    )?;
    let uniform = Distribution::<u64, f64>::uniform(0..params.outputs())?;
    let delta = statistical_distance(&e.to_distribution::<f64>()?, &uniform)?;
    let (q_h, q_sc) = script.queries();
    let q = q_h + 2 * q_sc;
    Ok(ProbeReport { samples, q, delta, bound: uniformity_distance(q, params.ell, params.k)? })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn replay_is_not_fresh() {
        let p = Params::new(4, 1, 4).unwrap();
        assert_eq!(uniformity_probe(ProbeScript::Replay { x: 3 }, p, 10, 1), Err(Error::FreshnessViolation));
    }

    #[test]
    fn ignoring_script_bound_is_one_over_y() {
        let p = Params::new(4, 1, 4).unwrap();
        let r = uniformity_probe(ProbeScript::Ignoring { x: 5 }, p, 20_000, 2).unwrap();
        assert_eq!(r.bound, 1.0 / 16.0);
        assert!(r.delta < 0.03);
    }
}
