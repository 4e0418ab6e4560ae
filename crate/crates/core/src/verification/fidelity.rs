//! Joint-output comparison of the ideal oracles and the lazy simulators on a
//! fixed query script.
//!
//! Outcomes are compared up to relabelling: hash values are numbered by
//! first appearance, and inside each prefix class the messages not fixed by
//! the script are numbered by first appearance. Both the ideal oracles and
//! the simulators are invariant under permutations of the hash range and
//! under per-class permutations of the unnamed messages, so two outcome
//! distributions agree exactly when their relabelled images agree, while the
//! relabelled space is far smaller and so far cheaper to estimate.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::empirical::{chunk_seed, collect_empirical_par, EmpiricalDistribution};
use crate::error::{Error, Result};
use crate::oracle::{FunctionTable, Input, OracleAnswer, Params};
use crate::simulation::{cp_co_bar, cp_co_sim, prefix_ro, prefix_ro_bar, LazyHashState, Step, Telemetry};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScriptStep {
    Ro { m: u32, r: u32 },
    CpCo { r: u32, r2: u32 },
}

/// Fixed sequence of random-oracle and CP-CO queries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Script {
    pub steps: Vec<ScriptStep>,
}

impl Script {
    /// `RO(0‖0), CP-CO(0, 1), RO(1‖1), CP-CO(0, 0), RO(1‖0)`
    pub fn default_script() -> Self {
        Self {
            steps: vec![
                ScriptStep::Ro { m: 0, r: 0 },
                ScriptStep::CpCo { r: 0, r2: 1 },
                ScriptStep::Ro { m: 1, r: 1 },
                ScriptStep::CpCo { r: 0, r2: 0 },
                ScriptStep::Ro { m: 1, r: 0 },
            ],
        }
    }

    pub fn check(&self, params: Params) -> Result<()> {
        for step in &self.steps {
            match *step {
                ScriptStep::Ro { m, r } => params.check_input(Input::new(m, r))?,
                ScriptStep::CpCo { r, r2 } => {
                    params.check_prefix(r)?;
                    params.check_prefix(r2)?;
                }
            }
        }
        Ok(())
    }

    /// Points named by the script's random-oracle steps.
    fn fixed_points(&self) -> BTreeSet<(u32, u32)> {
        self.steps
            .iter()
            .filter_map(|s| match *s {
                ScriptStep::Ro { m, r } => Some((r, m)),
                ScriptStep::CpCo { .. } => None,
            })
            .collect()
    }
}

impl fmt::Display for Script {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .steps
            .iter()
            .map(|s| match *s {
                ScriptStep::Ro { m, r } => format!("ro:{m}:{r}"),
                ScriptStep::CpCo { r, r2 } => format!("cpco:{r}:{r2}"),
            })
            .collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for Script {
    type Err = Error;

    /// `default`, or comma-separated `ro:m:r` and `cpco:r:r2` steps.
    fn from_str(s: &str) -> Result<Self> {
        if s == "default" {
            return Ok(Self::default_script());
        }
        let bad = || Error::Config(format!("malformed script `{s}`"));
        let mut steps = Vec::new();
        for part in s.split(',') {
            let fields: Vec<&str> = part.trim().split(':').collect();
            let [op, a, b] = fields[..] else { return Err(bad()) };
            let (a, b) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
            steps.push(match op {
                "ro" => ScriptStep::Ro { m: a, r: b },
                "cpco" => ScriptStep::CpCo { r: a, r2: b },
                _ => return Err(bad()),
            });
        }
        Ok(Self { steps })
    }
}

/// Answer to one script step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RawStep {
    Hash(u32),
    Answer(OracleAnswer),
}

/// Runs the script against a fresh random function.
pub fn run_ideal<R: Rng + ?Sized>(params: Params, script: &Script, rng: &mut R) -> Result<Vec<RawStep>> {
    let table = FunctionTable::random(params, rng)?;
    script
        .steps
        .iter()
        .map(|s| match *s {
            ScriptStep::Ro { m, r } => table.ro_query(params.join(Input::new(m, r))).map(RawStep::Hash),
            ScriptStep::CpCo { r, r2 } => table.cp_co_query(r, r2, rng).map(RawStep::Answer),
        })
        .collect()
}

/// Runs the script against the exact simulators.
pub fn run_exact<R: Rng + ?Sized>(params: Params, script: &Script, rng: &mut R) -> Result<(Vec<RawStep>, Telemetry)> {
    let mut state = LazyHashState::new(params);
    let out = script
        .steps
        .iter()
        .map(|s| match *s {
            ScriptStep::Ro { m, r } => prefix_ro(&mut state, params.join(Input::new(m, r)), rng).map(RawStep::Hash),
            ScriptStep::CpCo { r, r2 } => cp_co_sim(&mut state, r, r2, rng).map(RawStep::Answer),
        })
        .collect::<Result<_>>()?;
    Ok((out, state.telemetry()))
}

/// Runs the script against the simplified simulators; aborts propagate.
pub fn run_simplified<R: Rng + ?Sized>(params: Params, script: &Script, rng: &mut R) -> Result<Step<Vec<RawStep>>> {
    let mut state = LazyHashState::new(params);
    let mut out = Vec::with_capacity(script.steps.len());
    for s in &script.steps {
        let step = match *s {
            ScriptStep::Ro { m, r } => prefix_ro_bar(&mut state, params.join(Input::new(m, r)), rng)?.value().map(RawStep::Hash),
            ScriptStep::CpCo { r, r2 } => cp_co_bar(&mut state, r, r2, rng)?.value().map(RawStep::Answer),
        };
        match step {
            Some(v) => out.push(v),
            None => return Ok(Step::Abort),
        }
    }
    Ok(Step::Value(out))
}

/// Code of a bottom answer in a canonical outcome.
pub const BOTTOM: u32 = u32::MAX;

/// Relabels an outcome: hash values by first appearance; script-named
/// messages `m` as `2m`; other messages as `2i + 1`, `i` being their order
/// of first appearance inside their class.
pub fn canonicalize(script: &Script, raw: &[RawStep]) -> Vec<u32> {
    let fixed = script.fixed_points();
    let mut ys: HashMap<u32, u32> = HashMap::new();
    let mut ms: HashMap<(u32, u32), u32> = HashMap::new();
    let mut next_free: HashMap<u32, u32> = HashMap::new();
    let mut code = |i: Input, ms: &mut HashMap<(u32, u32), u32>| {
        if fixed.contains(&(i.r, i.m)) {
            return 2 * i.m;
        }
        *ms.entry((i.r, i.m)).or_insert_with(|| {
            let n = next_free.entry(i.r).or_insert(0);
            *n += 1;
            2 * (*n - 1) + 1
        })
    };
    let mut out = Vec::with_capacity(2 * raw.len());
    for step in raw {
        match *step {
            RawStep::Hash(y) => {
                let next = ys.len() as u32;
                out.push(*ys.entry(y).or_insert(next));
            }
            RawStep::Answer(OracleAnswer::Pair(a, b)) => {
                out.push(code(a, &mut ms));
                out.push(code(b, &mut ms));
            }
            RawStep::Answer(OracleAnswer::Single(a)) => out.push(code(a, &mut ms)),
            RawStep::Answer(OracleAnswer::Bottom) => out.push(BOTTOM),
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelityReport {
    pub params: Params,
    pub script: String,
    pub samples: u64,
    pub cells: usize,
    pub tv: f64,
    /// Expected distance between two same-distribution tallies of this size.
    pub noise_floor: f64,
    pub seed: u64,
}

/// Tallies canonical outcomes of the ideal oracles and of the exact
/// simulators, `samples` runs each, and reports their distance.
pub fn fidelity_experiment(params: Params, script: &Script, samples: u64, seed: u64) -> Result<FidelityReport> {
    script.check(params)?;
    let ideal = collect_empirical_par(|rng| Ok(canonicalize(script, &run_ideal(params, script, rng)?)), samples, chunk_seed(seed, 0))?;
    let sim = collect_empirical_par(
        |rng| Ok(canonicalize(script, &run_exact(params, script, rng)?.0)),
        samples,
        chunk_seed(seed, 1),
    )?;
    report(params, script, samples, seed, &ideal, &sim)
}

fn report(
    params: Params,
    script: &Script,
    samples: u64,
    seed: u64,
    a: &EmpiricalDistribution<Vec<u32>>,
    b: &EmpiricalDistribution<Vec<u32>>,
) -> Result<FidelityReport> {
    let cells = a.counts().keys().chain(b.counts().keys()).collect::<BTreeSet<_>>().len();
    Ok(FidelityReport {
        params,
        script: script.to_string(),
        samples,
        cells,
        tv: a.distance(b)?,
        noise_floor: a.noise_floor(b),
        seed,
    })
}
