//! Lazy-sampling simulation of a random prefix hash together with its
//! chosen-prefix collision oracle.
//!
//! Two tables are kept per prefix class `r`:
//!
//! * `T`: recorded assignments `m -> y` (the simulator has committed `h(m||r) = y`);
//! * `L`: committed preimage counts `y -> n` (exactly `n` messages of class `r` hash to `y`).
//!
//! Every value of `T` appears in `L` with `n >= #T(r, y)`. Unrecorded
//! messages of a class are exchangeable: they hash to a known value `y` with
//! weight `n - #T(r, y)` and otherwise to a fresh value, whose count is then
//! committed by a binomial draw over the messages not yet accounted for.

use std::collections::{BTreeMap, HashMap};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::binomial::{bernoulli_ratio, sample_binomial, BinomialSpec};
use crate::error::{Error, Result};
use crate::oracle::{HashOracle, Input, OracleAnswer, Params};

/// Result of the simplified simulators, which may abort.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Step<T> {
    Value(T),
    Abort,
}

impl<T> Step<T> {
    pub fn is_abort(&self) -> bool {
        matches!(self, Step::Abort)
    }

    pub fn value(self) -> Option<T> {
        match self {
            Step::Value(v) => Some(v),
            Step::Abort => None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
struct PrefixClass {
    assigned: HashMap<u32, u32>,
    by_value: BTreeMap<u32, Vec<u32>>,
    counts: BTreeMap<u32, u64>,
}

impl PrefixClass {
    fn recorded(&self, y: u32) -> u64 {
        self.by_value.get(&y).map_or(0, |v| v.len() as u64)
    }

    fn committed(&self) -> u64 {
        self.counts.values().sum()
    }

    fn record(&mut self, m: u32, y: u32) {
        self.assigned.insert(m, y);
        self.by_value.entry(y).or_default().push(m);
    }

    /// `Σ (n − #T(r, y))` over `L(r)`.
    fn unrecorded_known(&self) -> Result<u64> {
        let mut total = 0;
        for (&y, &n) in &self.counts {
            let rec = self.recorded(y);
            if rec > n {
                return Err(Error::Inconsistent(format!("#T(r, {y}) = {rec} exceeds n = {n}")));
            }
            total += n - rec;
        }
        Ok(total)
    }

    /// Uniform value outside `L(r)`.
    fn fresh_value<R: Rng + ?Sized>(&self, outputs: u64, rng: &mut R) -> Result<u32> {
        let avail = outputs - self.counts.len() as u64;
        if avail == 0 {
            return Err(Error::Inconsistent("no unused hash value left".into()));
        }
        let mut y = rng.random_range(0..avail);
        for &used in self.counts.keys() {
            if used as u64 <= y {
                y += 1;
            } else {
                break;
            }
        }
        Ok(y as u32)
    }

    /// Uniform message of the class with no recorded assignment.
    fn fresh_message<R: Rng + ?Sized>(&self, messages: u64, rng: &mut R) -> Result<u32> {
        let taken = self.assigned.len() as u64;
        if taken >= messages {
            return Err(Error::Inconsistent("every message of the class is recorded".into()));
        }
        if 2 * taken <= messages {
            loop {
                let m = rng.random_range(0..messages) as u32;
                if !self.assigned.contains_key(&m) {
                    return Ok(m);
                }
            }
        }
        let mut sorted: Vec<u32> = self.assigned.keys().copied().collect();
        sorted.sort_unstable();
        let mut m = rng.random_range(0..messages - taken);
        for &used in &sorted {
            if used as u64 <= m {
                m += 1;
            } else {
                break;
            }
        }
        Ok(m as u32)
    }
}

/// Counters describing how the exact simulator answered fresh queries.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Telemetry {
    /// Fresh (non-replayed) hash queries.
    pub fresh_queries: u64,
    /// Fresh queries answered with an already-committed value.
    pub known_value_hits: u64,
    /// `Σ max(p, #L(r)/#Y)` over fresh queries: the total variation between
    /// one exact step and one abort-on-collision step, summed along the run.
    pub deviation: f64,
}

/// Shared `T`/`L` tables of the simulators. Single-owner and mutable; one per simulated world.
#[derive(Debug, Clone, PartialEq)]
pub struct LazyHashState {
    params: Params,
    classes: HashMap<u32, PrefixClass>,
    telemetry: Telemetry,
}

impl LazyHashState {
    pub fn new(params: Params) -> Self {
        Self { params, classes: HashMap::new(), telemetry: Telemetry::default() }
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn telemetry(&self) -> Telemetry {
        self.telemetry
    }

    /// Recorded `T` entry of `m || r`, if any.
    pub fn lookup(&self, input: Input) -> Option<u32> {
        self.classes.get(&input.r)?.assigned.get(&input.m).copied()
    }

    /// Committed count `n` of `(y, r)` in `L`.
    pub fn count(&self, y: u32, r: u32) -> Option<u64> {
        self.classes.get(&r)?.counts.get(&y).copied()
    }

    /// `#T(r, y)`
    pub fn recorded(&self, r: u32, y: u32) -> u64 {
        self.classes.get(&r).map_or(0, |c| c.recorded(y))
    }

    /// `#T(r)`
    pub fn recorded_in(&self, r: u32) -> u64 {
        self.classes.get(&r).map_or(0, |c| c.assigned.len() as u64)
    }

    /// `#L(r)`
    pub fn values_in(&self, r: u32) -> u64 {
        self.classes.get(&r).map_or(0, |c| c.counts.len() as u64)
    }

    /// `#T`
    pub fn len(&self) -> u64 {
        self.classes.values().map(|c| c.assigned.len() as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Commits `((y, r), n)` to `L` directly, e.g. to set up a scenario.
    pub fn commit_count(&mut self, y: u32, r: u32, n: u64) -> Result<()> {
        self.params.check_output(y)?;
        self.params.check_prefix(r)?;
        self.classes.entry(r).or_default().counts.insert(y, n);
        self.check_invariants()
    }

    /// Records `((m, r), y)` in `T` directly; `(y, r)` must already be in `L`.
    pub fn record(&mut self, input: Input, y: u32) -> Result<()> {
        self.params.check_input(input)?;
        let class = self.classes.entry(input.r).or_default();
        if class.assigned.contains_key(&input.m) {
            return Err(Error::Precondition("input already recorded"));
        }
        class.record(input.m, y);
        self.check_invariants()
    }

    /// Verifies the synchronisation invariants between `T` and `L`.
    pub fn check_invariants(&self) -> Result<()> {
        let (messages, outputs) = (self.params.messages(), self.params.outputs());
        for (&r, class) in &self.classes {
            let mut recorded = 0;
            for (&y, ms) in &class.by_value {
                let n = class
                    .counts
                    .get(&y)
                    .ok_or_else(|| Error::Inconsistent(format!("T holds ({y}, {r}) but L does not")))?;
                if ms.is_empty() || (ms.len() as u64) > *n {
                    return Err(Error::Inconsistent(format!("#T({r}, {y}) = {} vs n = {n}", ms.len())));
                }
                if ms.iter().any(|m| class.assigned.get(m) != Some(&y)) {
                    return Err(Error::Inconsistent(format!("T index for ({y}, {r}) out of sync")));
                }
                recorded += ms.len();
            }
            if recorded != class.assigned.len() {
                return Err(Error::Inconsistent(format!("T index size mismatch for class {r}")));
            }
            let committed = class.committed();
            if committed > messages {
                return Err(Error::Inconsistent(format!("class {r} commits {committed} > #M")));
            }
            let used = class.counts.len() as u64;
            if used > outputs || (used == outputs && committed != messages) {
                return Err(Error::Inconsistent(format!("class {r} has {used} values, Σn = {committed}")));
            }
        }
        Ok(())
    }

    fn class(&mut self, r: u32) -> &mut PrefixClass {
        self.classes.entry(r).or_default()
    }

    /// Commits the count of a value seen for the first time in class `r`,
    /// `extra` messages of the class being already known to hash to it.
    fn commit_fresh<R: Rng + ?Sized>(&mut self, y: u32, r: u32, extra: u64, rng: &mut R) -> Result<u64> {
        let (messages, outputs) = (self.params.messages(), self.params.outputs());
        let class = self.class(r);
        let avail = outputs - class.counts.len() as u64;
        let committed = class.committed();
        let remaining = messages
            .checked_sub(committed + extra)
            .ok_or_else(|| Error::Inconsistent(format!("class {r}: Σn = {committed} leaves no room")))?;
        let spec = BinomialSpec::new(remaining, 1, avail)?;
        let n = sample_binomial::<f64, _>(&spec, rng) + extra;
        class.counts.insert(y, n);
        Ok(n)
    }
}

/// Exact simulation of the random oracle on flat input `x`.
pub fn prefix_ro<R: Rng + ?Sized>(state: &mut LazyHashState, x: u32, rng: &mut R) -> Result<u32> {
    let params = state.params;
    params.check_flat(x)?;
    let Input { m, r } = params.split(x);
    let (messages, outputs) = (params.messages(), params.outputs());

    let class = state.class(r);
    if let Some(&y) = class.assigned.get(&m) {
        return Ok(y);
    }
    let weight = class.unrecorded_known()?;
    let open = messages - class.assigned.len() as u64;
    if weight > open {
        return Err(Error::Inconsistent(format!("known weight {weight} exceeds {open} open messages")));
    }
    let used = class.counts.len() as u64;

    let p = weight as f64 / open as f64;
    let t = &mut state.telemetry;
    t.fresh_queries += 1;
    t.deviation += p.max(used as f64 / outputs as f64);

    if bernoulli_ratio(weight, open, rng) {
        state.telemetry.known_value_hits += 1;
        let class = state.class(r);
        let mut u = rng.random_range(0..weight);
        let mut chosen = None;
        for (&y, &n) in &class.counts {
            let w = n - class.recorded(y);
            if u < w {
                chosen = Some(y);
                break;
            }
            u -= w;
        }
        let y = chosen.ok_or_else(|| Error::Inconsistent("weighted pick fell off L".into()))?;
        class.record(m, y);
        Ok(y)
    } else {
        let y = state.class(r).fresh_value(outputs, rng)?;
        state.commit_fresh(y, r, 1, rng)?;
        state.class(r).record(m, y);
        Ok(y)
    }
}

/// Simplified simulation: a uniform value, aborting when it was already committed
/// in the class or the class has no messages left.
pub fn prefix_ro_bar<R: Rng + ?Sized>(state: &mut LazyHashState, x: u32, rng: &mut R) -> Result<Step<u32>> {
    let params = state.params;
    params.check_flat(x)?;
    let Input { m, r } = params.split(x);
    if let Some(y) = state.lookup(Input { m, r }) {
        return Ok(Step::Value(y));
    }
    let y = rng.random_range(0..params.outputs()) as u32;
    let class = state.class(r);
    if class.counts.contains_key(&y) || class.committed() >= params.messages() {
        return Ok(Step::Abort);
    }
    state.commit_fresh(y, r, 1, rng)?;
    state.class(r).record(m, y);
    Ok(Step::Value(y))
}

/// Exact simulation of the chosen-prefix collision oracle.
pub fn cp_co_sim<R: Rng + ?Sized>(state: &mut LazyHashState, r: u32, r2: u32, rng: &mut R) -> Result<OracleAnswer> {
    match cp_co_with(state, r, r2, rng, false)? {
        Step::Value(a) => Ok(a),
        Step::Abort => Err(Error::Inconsistent("exact simulator aborted".into())),
    }
}

/// Chosen-prefix collision simulation on top of [`prefix_ro_bar`]; aborts propagate.
pub fn cp_co_bar<R: Rng + ?Sized>(state: &mut LazyHashState, r: u32, r2: u32, rng: &mut R) -> Result<Step<OracleAnswer>> {
    cp_co_with(state, r, r2, rng, true)
}

fn cp_co_with<R: Rng + ?Sized>(
    state: &mut LazyHashState,
    r: u32,
    r2: u32,
    rng: &mut R,
    simplified: bool,
) -> Result<Step<OracleAnswer>> {
    let params = state.params;
    params.check_prefix(r)?;
    params.check_prefix(r2)?;
    let messages = params.messages();

    let m = rng.random_range(0..messages) as u32;
    let x = params.join(Input::new(m, r));
    let y = if simplified {
        match prefix_ro_bar(state, x, rng)? {
            Step::Value(y) => y,
            Step::Abort => return Ok(Step::Abort),
        }
    } else {
        prefix_ro(state, x, rng)?
    };

    let n = match state.count(y, r2) {
        Some(n) => n,
        None => state.commit_fresh(y, r2, 0, rng)?,
    };
    if n == 0 {
        return Ok(Step::Value(OracleAnswer::Bottom));
    }

    let class = state.class(r2);
    let rec = class.recorded(y);
    let (reuse_num, reuse_den) = if r == r2 {
        if n == 1 {
            return Ok(Step::Value(OracleAnswer::Bottom));
        }
        if rec == 0 {
            return Err(Error::Inconsistent("queried point missing from T".into()));
        }
        (rec - 1, n - 1)
    } else {
        (rec, n)
    };
    if reuse_num > reuse_den {
        return Err(Error::Inconsistent(format!("reuse probability {reuse_num}/{reuse_den}")));
    }

    let m2 = if bernoulli_ratio(reuse_num, reuse_den, rng) {
        let partners = &class.by_value[&y];
        if r == r2 {
            let pos = partners.iter().position(|&p| p == m).expect("m recorded under y");
            let mut i = rng.random_range(0..partners.len() - 1);
            if i >= pos {
                i += 1;
            }
            partners[i]
        } else {
            partners[rng.random_range(0..partners.len())]
        }
    } else {
        let m2 = class.fresh_message(messages, rng)?;
        class.record(m2, y);
        m2
    };
    Ok(Step::Value(OracleAnswer::Pair(Input::new(m, r), Input::new(m2, r2))))
}

/// Stand-alone random-oracle handle backed by the exact simulator.
pub struct LazyOracle {
    state: LazyHashState,
    rng: ChaCha8Rng,
}

impl LazyOracle {
    pub fn new(params: Params, rng: ChaCha8Rng) -> Self {
        Self { state: LazyHashState::new(params), rng }
    }

    pub fn state(&self) -> &LazyHashState {
        &self.state
    }

    pub fn cp_co(&mut self, r: u32, r2: u32) -> Result<OracleAnswer> {
        cp_co_sim(&mut self.state, r, r2, &mut self.rng)
    }
}

impl HashOracle for LazyOracle {
    fn params(&self) -> Params {
        self.state.params()
    }

    fn hash(&mut self, x: u32) -> Result<u32> {
        prefix_ro(&mut self.state, x, &mut self.rng)
    }
}
