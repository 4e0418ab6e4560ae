use std::cell::RefCell;
use std::collections::BTreeMap;
use std::rc::Rc;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::config::{Backend, ExperimentConfig};
use super::game::{Game, GameTranscript, Verdict};
use super::results::{ExperimentResult, ResultParams};
use super::world::{World, WorldOracle};
use crate::attacks::Adversary;
use crate::error::{Error, Result};
use crate::num::Word;
use crate::oracle::FunctionTable;
use crate::schemes::{dsa_grgen, rsa_gen, DsaKey, SchemeInstance, SchemeKind};
use crate::simulation::LazyHashState;
use crate::verification::chunk_seed;

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959963984540054;

/// Random streams of one trial, all keyed by the same per-trial seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamId {
    World = 0,
    Keys = 1,
    Signer = 2,
    Adversary = 3,
    Oracle = 4,
}

/// Per-trial seed: SplitMix64 mix of the base seed and the trial index.
pub fn trial_seed(base: u64, index: u64) -> u64 {
    chunk_seed(base, index)
}

pub fn stream(seed: u64, id: StreamId) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id as u64);
    rng
}

/// Wilson score interval at 95%.
pub fn wilson(successes: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z95 * Z95;
    let centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / (1.0 + z2 / n);
    ((centre - half).max(0.0).min(p), (centre + half).min(1.0).max(p))
}

fn build_game<W: Word>(config: &ExperimentConfig, backend: Backend, seed: u64) -> Result<Game<W>> {
    let params = config.params;
    let world = match backend {
        Backend::Lazy => World::Lazy { state: LazyHashState::new(params), rng: stream(seed, StreamId::Oracle) },
        _ => World::Ideal {
            table: FunctionTable::random(params, &mut stream(seed, StreamId::World))?,
            rng: stream(seed, StreamId::Oracle),
        },
    };
    let world = Rc::new(RefCell::new(world));
    let oracle = WorldOracle::new(Rc::clone(&world));
    let mut keys = stream(seed, StreamId::Keys);
    let scheme = match config.scheme {
        SchemeKind::Dsa => {
            let group = dsa_grgen::<W, _>(params.k, config.jbits, &mut keys)?;
            SchemeInstance::dsa(DsaKey::generate(group, &mut keys)?, oracle)?
        }
        kind => {
            let key = rsa_gen::<W, _>(config.modbits, &mut keys)?;
            match kind {
                SchemeKind::RsaFdh => SchemeInstance::rsa_fdh(key, oracle)?,
                SchemeKind::RsaPfdh => SchemeInstance::rsa_pfdh(key, oracle, params.t)?,
                SchemeKind::RsaPfdhXor => SchemeInstance::rsa_pfdh_xor(key, oracle)?,
                _ => SchemeInstance::rsassa_pkcs15(key, oracle, config.pkcs_s, config.pkcs_alg)?,
            }
        }
    };
    Ok(Game::new(config.model, world, scheme, stream(seed, StreamId::Signer)))
}

/// Plays trial `index` of the configured attack.
pub fn run_game(config: &ExperimentConfig, index: u64) -> Result<GameTranscript<u64>> {
    run_game_with(config, index, &config.attack)
}

/// Plays trial `index` with a caller-supplied adversary.
pub fn run_game_with<W: Word, A: Adversary<W> + ?Sized>(
    config: &ExperimentConfig,
    index: u64,
    adversary: &A,
) -> Result<GameTranscript<W>> {
    let backend = config.validate()?;
    play(config, backend, index, adversary)
}

fn play<W: Word, A: Adversary<W> + ?Sized>(
    config: &ExperimentConfig,
    backend: Backend,
    index: u64,
    adversary: &A,
) -> Result<GameTranscript<W>> {
    let seed = trial_seed(config.seed, index);
    let mut game = build_game::<W>(config, backend, seed)?;
    let outcome = adversary.attack(&mut game, &mut stream(seed, StreamId::Adversary))?;
    Ok(game.finish(&outcome))
}

/// Verdicts of trials `0..config.trials`, in index order.
pub fn run_verdicts<W: Word, A: Adversary<W> + ?Sized>(config: &ExperimentConfig, adversary: &A) -> Result<Vec<Verdict>> {
    let backend = config.validate()?;
    let work = || -> Vec<Result<Verdict>> {
        (0..config.trials).into_par_iter().map(|i| play::<W, A>(config, backend, i, adversary).map(|t| t.verdict)).collect()
    };
    let verdicts = if config.workers == 0 {
        work()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(config.workers)
            .build()
            .map_err(|e| Error::Config(e.to_string()))?
            .install(work)
    };
    verdicts.into_iter().collect()
}

/// Runs all trials of the configured attack and aggregates them.
pub fn run_trials(config: &ExperimentConfig) -> Result<ExperimentResult> {
    run_trials_with::<u64, _>(config, &config.attack)
}

pub fn run_trials_with<W: Word, A: Adversary<W> + ?Sized>(
    config: &ExperimentConfig,
    adversary: &A,
) -> Result<ExperimentResult> {
    let start = Instant::now();
    let verdicts = run_verdicts::<W, A>(config, adversary)?;
    let successes = verdicts.iter().filter(|&&v| v == Verdict::Win).count() as u64;
    let aborts = verdicts.iter().filter(|&&v| v == Verdict::Abort).count() as u64;
    let (main, extra) = config.bounds();
    let sizes = config.bound_sizes();
    let (wilson_lo, wilson_hi) = wilson(successes, config.trials);
    let extra_bounds: BTreeMap<String, f64> =
        extra.into_iter().map(|b| Ok((b.name().to_string(), b.evaluate::<f64>(&sizes)?))).collect::<Result<_>>()?;
    Ok(ExperimentResult {
        scheme: config.scheme.name().to_string(),
        model: config.model.name().to_string(),
        attack: config.attack.kind().name().to_string(),
        params: ResultParams {
            l: config.params.ell,
            t: config.params.t,
            k: config.params.k,
            modbits: (config.scheme != SchemeKind::Dsa).then_some(config.modbits),
            k1: config.k1(),
            jbits: (config.scheme == SchemeKind::Dsa).then_some(config.jbits),
        },
        trials: config.trials,
        successes,
        aborts,
        empirical_rate: successes as f64 / config.trials as f64,
        theoretical_bound: main.evaluate(&sizes)?,
        bound_kind: main.name().to_string(),
        bound_direction: main.direction(),
        extra_bounds,
        wilson_lo,
        wilson_hi,
        seed: config.seed,
        wall_ms: if config.timing { start.elapsed().as_millis() as u64 } else { 0 },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_contains_rate() {
        for (s, n) in [(0, 1), (1, 1), (6314, 10_000), (3, 10), (0, 10_000)] {
            let (lo, hi) = wilson(s, n);
            let p = s as f64 / n as f64;
            assert!(lo <= p && p <= hi, "{s}/{n}");
            assert!((0.0..=1.0).contains(&lo) && (0.0..=1.0).contains(&hi));
        }
        let (lo, hi) = wilson(6314, 10_000);
        assert!((lo - 0.62191).abs() < 1e-4 && (hi - 0.64078).abs() < 1e-4, "{lo} {hi}");
    }

    #[test]
    fn streams_differ() {
        use rand::Rng;
        let a: u64 = stream(1, StreamId::World).random();
        let b: u64 = stream(1, StreamId::Keys).random();
        assert_ne!(a, b);
        assert_ne!(trial_seed(1, 0), trial_seed(1, 1));
    }
}
