use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use super::bounds::{BoundKind, BoundSizes, Direction};
use super::config::{Backend, ExperimentConfig};
use super::correctness::{correctness_check, CorrectnessSizes};
use super::model::Model;
use super::results::{emit_results, ExperimentResult, Format, ResultParams};
use super::trials::{run_trials, wilson};
use crate::attacks::{AttackKind, AttackSpec};
use crate::error::{Error, Result};
use crate::oracle::Params;
use crate::schemes::{BitString, SchemeKind};
use crate::verification::{abort_rate_experiment, fidelity_experiment, max_load_experiment, Script};

#[derive(Parser, Debug)]
#[command(name = "wrom", version, about = "Weakened random oracle experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a forgery attack over many fresh games.
    Attack(AttackArgs),
    /// Compare ideal oracles and lazy simulators on a query script.
    Fidelity(FidelityArgs),
    /// Frequency of overloaded prefix classes over fresh random tables.
    Loadtest(LoadArgs),
    /// Abort frequency of the simplified simulators.
    Abortrate(AbortArgs),
    /// Print closed-form bounds.
    Bounds(BoundsArgs),
    /// Sign/verify round trips for every scheme.
    Correctness(CorrectnessArgs),
}

#[derive(Args, Debug)]
struct Output {
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Result file.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "json", value_parser = ["json", "csv"])]
    format: String,
    /// Write wall_ms = 0 so reruns produce identical files.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Args, Debug)]
struct AttackArgs {
    #[arg(long)]
    scheme: String,
    #[arg(long)]
    model: String,
    /// collision, second-preimage or control; inferred from the model if absent.
    #[arg(long)]
    attack: Option<String>,
    #[arg(long, default_value_t = 8)]
    l: u32,
    /// Prefix width; defaults to the salt width for salted schemes, 0 for
    /// unprefixed models, 4 otherwise.
    #[arg(long)]
    t: Option<u32>,
    #[arg(long, default_value_t = 8)]
    k: u32,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 16)]
    modbits: u32,
    /// Salt width of rsa-pfdh (sets t).
    #[arg(long)]
    k1: Option<u32>,
    #[arg(long, default_value_t = 16)]
    jbits: u32,
    /// Prefix handed to the collision oracle.
    #[arg(long, default_value_t = 0)]
    prefix: u32,
    /// Message signed by the second-preimage attack.
    #[arg(long, default_value_t = 0)]
    message: u32,
    /// Rounds of the control probe.
    #[arg(long, default_value_t = 64)]
    budget: u32,
    #[arg(long, default_value = "auto")]
    backend: String,
    #[arg(long, default_value = "0001")]
    pkcs_s: String,
    #[arg(long, default_value = "101")]
    pkcs_alg: String,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct FidelityArgs {
    /// `default` or steps such as `ro:0:0,cpco:0:1`.
    #[arg(long, default_value = "default")]
    script: String,
    #[arg(long, default_value_t = 2)]
    l: u32,
    #[arg(long, default_value_t = 1)]
    t: u32,
    #[arg(long, default_value_t = 2)]
    k: u32,
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 0.01)]
    tolerance: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct LoadArgs {
    #[arg(long, default_value_t = 8)]
    l: u32,
    #[arg(long, default_value_t = 2)]
    t: u32,
    #[arg(long, default_value_t = 8)]
    k: u32,
    /// Number of fresh tables.
    #[arg(long, default_value_t = 1_000_000)]
    trials: u64,
    /// Prefix class examined.
    #[arg(long, default_value_t = 0)]
    r: u32,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct AbortArgs {
    #[arg(long, default_value_t = 8)]
    l: u32,
    #[arg(long, default_value_t = 2)]
    t: u32,
    #[arg(long, default_value_t = 8)]
    k: u32,
    /// Number of scripts.
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value_t = 16)]
    q_h: u64,
    #[arg(long, default_value_t = 8)]
    q_sc: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    /// Print only this bound.
    #[arg(long)]
    bound: Option<String>,
    #[arg(long, default_value_t = 8)]
    l: u32,
    #[arg(long, default_value_t = 8)]
    k: u32,
    #[arg(long, default_value_t = 16)]
    k1: u32,
    #[arg(long, default_value_t = 0)]
    q_sign: u64,
    #[arg(long, default_value_t = 0)]
    q_h: u64,
    #[arg(long, default_value_t = 0)]
    q_sc: u64,
}

#[derive(Args, Debug)]
struct CorrectnessArgs {
    /// Check one scheme only.
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long, default_value_t = 1_000)]
    messages: u64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 8)]
    l: u32,
    #[arg(long, default_value_t = 8)]
    k: u32,
    #[arg(long, default_value_t = 4)]
    k1: u32,
    #[arg(long, default_value_t = 16)]
    modbits: u32,
    #[arg(long, default_value_t = 16)]
    jbits: u32,
}

/// Failure of a run, mapped onto the exit code.
enum Failure {
    Config(Error),
    Runtime(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_)
            | Error::OracleNotGranted(..)
            | Error::UnknownBound(_)
            | Error::InvalidParams(_)
            | Error::ParamsTooLarge { .. }
            | Error::Length { .. }
            | Error::EncodingOverflow { .. }
            | Error::Io { .. } => Failure::Config(e),
            _ => Failure::Runtime(e),
        }
    }
}

/// Entry point of the `wrom` binary: 0 on success, 1 when a result misses
/// its tolerance, 2 on configuration errors.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Attack(a) => attack(a),
        Command::Fidelity(a) => fidelity(a),
        Command::Loadtest(a) => loadtest(a),
        Command::Abortrate(a) => abortrate(a),
        Command::Bounds(a) => bounds(a),
        Command::Correctness(a) => correctness(a),
    };
    match outcome {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(Failure::Config(e)) => {
            eprintln!("error: {e}");
            2
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn config_err(e: Error) -> Error {
    match e {
        Error::Config(_) => e,
        other => Error::Config(other.to_string()),
    }
}

fn attack_config(a: &AttackArgs) -> Result<ExperimentConfig> {
    let scheme: SchemeKind = a.scheme.parse()?;
    let model: Model = a.model.parse()?;
    let kind = match &a.attack {
        Some(s) => s.parse()?,
        None if model == Model::CpSpt => AttackKind::SecondPreimage,
        None if scheme.is_salted() => AttackKind::Control,
        None => AttackKind::Collision,
    };
    let t = match (scheme, a.k1, a.t) {
        (SchemeKind::RsaPfdh, Some(k1), Some(t)) if k1 != t => {
            return Err(Error::Config(format!("rsa-pfdh salts the hash with its prefix: k1 = {k1} but t = {t}")))
        }
        (SchemeKind::RsaPfdh, Some(k1), _) => k1,
        (SchemeKind::RsaPfdhXor, _, None) => a.k,
        (_, _, Some(t)) => t,
        _ if model.is_unprefixed() => 0,
        _ => 4,
    };
    let params = Params::new(a.l, t, a.k).map_err(config_err)?;
    let attack = match kind {
        AttackKind::Collision => AttackSpec::Collision { prefix: a.prefix },
        AttackKind::SecondPreimage => AttackSpec::SecondPreimage { message: a.message },
        AttackKind::Control => AttackSpec::Control { budget: a.budget },
    };
    let mut c = ExperimentConfig::new(scheme, model, attack, params);
    c.modbits = a.modbits;
    c.jbits = a.jbits;
    c.pkcs_s = a.pkcs_s.parse::<BitString>()?;
    c.pkcs_alg = a.pkcs_alg.parse::<BitString>()?;
    c.backend = a.backend.parse::<Backend>()?;
    c.trials = a.trials;
    c.seed = a.seed;
    c.workers = a.output.workers;
    c.timing = !a.output.no_timing;
    c.validate()?;
    Ok(c)
}

fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    if workers == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build().map_err(|e| Error::Config(e.to_string()))?;
    Ok(pool.install(f))
}

fn write_results(results: &[ExperimentResult], output: &Output) -> Result<()> {
    if let Some(path) = &output.out {
        emit_results(results, output.format.parse()?, path)?;
    }
    Ok(())
}

fn write_report<T: Serialize>(report: &T, csv_row: Vec<(&'static str, String)>, output: &Output) -> Result<()> {
    let Some(path) = &output.out else { return Ok(()) };
    let body = match output.format.parse()? {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).map_err(|e| Error::Config(e.to_string()))?;
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| Error::Config(e.to_string());
            w.write_record(csv_row.iter().map(|(k, _)| *k)).map_err(io)?;
            w.write_record(csv_row.iter().map(|(_, v)| v.as_str())).map_err(io)?;
            String::from_utf8(w.into_inner().map_err(|e| Error::Config(e.to_string()))?)
                .map_err(|e| Error::Config(e.to_string()))?
        }
    };
    write_file(path, &body)
}

fn write_file(path: &Path, body: &str) -> Result<()> {
    let io = |e: std::io::Error| Error::Io { path: path.display().to_string(), message: e.to_string() };
    std::fs::File::create(path).and_then(|mut f| f.write_all(body.as_bytes())).map_err(io)
}

fn attack(a: AttackArgs) -> Result<bool, Failure> {
    let config = attack_config(&a)?;
    let result = run_trials(&config)?;
    println!("{}", result.summary());
    write_results(std::slice::from_ref(&result), &a.output)?;
    Ok(result.meets_bound())
}

fn fidelity(a: FidelityArgs) -> Result<bool, Failure> {
    let params = Params::new(a.l, a.t, a.k).map_err(config_err)?;
    let script: Script = a.script.parse()?;
    script.check(params).map_err(config_err)?;
    let report = with_workers(a.output.workers, || fidelity_experiment(params, &script, a.samples, a.seed))??;
    println!(
        "fidelity {} at l={} t={} k={}: TV = {:.5} over {} samples per side ({} cells, noise floor {:.5}), tolerance {}",
        report.script, a.l, a.t, a.k, report.tv, report.samples, report.cells, report.noise_floor, a.tolerance
    );
    let row = vec![
        ("script", report.script.clone()),
        ("l", a.l.to_string()),
        ("t", a.t.to_string()),
        ("k", a.k.to_string()),
        ("samples", report.samples.to_string()),
        ("cells", report.cells.to_string()),
        ("tv", format!("{:?}", report.tv)),
        ("noise_floor", format!("{:?}", report.noise_floor)),
        ("tolerance", format!("{:?}", a.tolerance)),
        ("seed", report.seed.to_string()),
    ];
    write_report(&report, row, &a.output)?;
    Ok(report.tv <= a.tolerance)
}

#[allow(clippy::too_many_arguments)]
fn plain_result(
    attack: &str,
    model: Model,
    params: Params,
    trials: u64,
    successes: u64,
    bound: BoundKind,
    sizes: &BoundSizes,
    seed: u64,
    wall_ms: u64,
) -> Result<ExperimentResult> {
    let (wilson_lo, wilson_hi) = wilson(successes, trials);
    Ok(ExperimentResult {
        scheme: "none".into(),
        model: model.name().into(),
        attack: attack.into(),
        params: ResultParams { l: params.ell, t: params.t, k: params.k, modbits: None, k1: None, jbits: None },
        trials,
        successes,
        aborts: 0,
        empirical_rate: successes as f64 / trials as f64,
        theoretical_bound: bound.evaluate(sizes)?,
        bound_kind: bound.name().into(),
        bound_direction: bound.direction(),
        extra_bounds: BTreeMap::new(),
        wilson_lo,
        wilson_hi,
        seed,
        wall_ms,
    })
}

fn elapsed(start: Instant, timing: bool) -> u64 {
    if timing {
        start.elapsed().as_millis() as u64
    } else {
        0
    }
}

fn loadtest(a: LoadArgs) -> Result<bool, Failure> {
    let params = Params::new(a.l, a.t, a.k).map_err(config_err)?;
    let start = Instant::now();
    let exp = with_workers(a.output.workers, || max_load_experiment(params, a.r, a.trials, a.seed))??;
    let sizes = BoundSizes { ell: a.l, k: a.k, ..Default::default() };
    let result = plain_result(
        "max-load",
        Model::Rom,
        params,
        exp.tables,
        exp.bad,
        BoundKind::MaxLoad,
        &sizes,
        a.seed,
        elapsed(start, !a.output.no_timing),
    )?;
    println!(
        "{}; threshold L = {:.3}, largest load {}, one-sided p = {:.4}",
        result.summary(),
        exp.threshold,
        exp.largest_load,
        exp.p_value
    );
    write_results(std::slice::from_ref(&result), &a.output)?;
    Ok(!exp.reject)
}

fn abortrate(a: AbortArgs) -> Result<bool, Failure> {
    let params = Params::new(a.l, a.t, a.k).map_err(config_err)?;
    let start = Instant::now();
    let rep = with_workers(a.output.workers, || abort_rate_experiment(params, a.q_h, a.q_sc, a.trials, a.seed))??;
    let sizes = BoundSizes { ell: a.l, k: a.k, q_h: a.q_h, q_sc: a.q_sc, ..Default::default() };
    let result = plain_result(
        "abort-rate",
        Model::CpCt,
        params,
        rep.runs,
        rep.aborts,
        BoundKind::SimulatorDeviation,
        &sizes,
        a.seed,
        elapsed(start, !a.output.no_timing),
    )?;
    println!("{}; standard error {:.5}", result.summary(), rep.sigma);
    write_results(std::slice::from_ref(&result), &a.output)?;
    Ok(rep.rate <= rep.bound + 3.0 * rep.sigma)
}

fn bounds(a: BoundsArgs) -> Result<bool, Failure> {
    let sizes = BoundSizes { ell: a.l, k: a.k, k1: a.k1, q_sign: a.q_sign, q_h: a.q_h, q_sc: a.q_sc };
    let kinds = match &a.bound {
        Some(name) => vec![name.parse::<BoundKind>()?],
        None => BoundKind::ALL.to_vec(),
    };
    for kind in kinds {
        let dir = match kind.direction() {
            Direction::Lower => "lower",
            Direction::Upper => "upper",
        };
        if kind.applies(&sizes) {
            println!("{:<30} {dir}  {:.10}", kind.name(), kind.evaluate::<f64>(&sizes)?);
        } else if a.bound.is_some() {
            return Err(kind.evaluate::<f64>(&sizes).unwrap_err().into());
        } else {
            println!("{:<30} {dir}  n/a", kind.name());
        }
    }
    Ok(true)
}

fn correctness(a: CorrectnessArgs) -> Result<bool, Failure> {
    let schemes = match &a.scheme {
        Some(s) => vec![s.parse::<SchemeKind>()?],
        None => SchemeKind::ALL.to_vec(),
    };
    let sizes = CorrectnessSizes { ell: a.l, k: a.k, k1: a.k1, modbits: a.modbits, jbits: a.jbits };
    let mut ok = true;
    for scheme in schemes {
        let rep = correctness_check(scheme, &sizes, a.messages, a.seed)?;
        println!("{:<14} {} messages, {} failures", scheme.name(), rep.messages, rep.failures);
        ok &= rep.failures == 0;
    }
    Ok(ok)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> i32 {
        cli_main(std::iter::once("wrom").chain(args.iter().copied()))
    }

    #[test]
    fn unknown_flag_is_usage_error() {
        assert_eq!(run(&["attack", "--bogus"]), 2);
        assert_eq!(run(&[]), 2);
    }

    #[test]
    fn oracle_attack_mismatch() {
        assert_eq!(run(&["attack", "--model", "cp-spt", "--scheme", "rsa-fdh", "--attack", "collision"]), 2);
        assert_eq!(run(&["attack", "--model", "cp-ct", "--scheme", "nope"]), 2);
    }

    #[test]
    fn bounds_command() {
        assert_eq!(run(&["bounds"]), 0);
        assert_eq!(run(&["bounds", "--bound", "collision-forgery"]), 0);
        assert_eq!(run(&["bounds", "--bound", "no-such-bound"]), 2);
        assert_eq!(run(&["bounds", "--bound", "second-preimage-forgery-large", "--l", "4"]), 2);
    }

    #[test]
    fn pfdh_salt_width_conflict() {
        assert_eq!(run(&["attack", "--model", "cp-spt", "--scheme", "rsa-pfdh", "--k1", "4", "--t", "5"]), 2);
    }
}
