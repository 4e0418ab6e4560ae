use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::bounds::Direction;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultParams {
    pub l: u32,
    pub t: u32,
    pub k: u32,
    pub modbits: Option<u32>,
    pub k1: Option<u32>,
    pub jbits: Option<u32>,
}

/// Aggregate of one experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub scheme: String,
    pub model: String,
    pub attack: String,
    pub params: ResultParams,
    pub trials: u64,
    pub successes: u64,
    pub aborts: u64,
    pub empirical_rate: f64,
    pub theoretical_bound: f64,
    pub bound_kind: String,
    pub bound_direction: Direction,
    /// Further applicable bounds by name.
    pub extra_bounds: BTreeMap<String, f64>,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
    pub seed: u64,
    pub wall_ms: u64,
}

impl ExperimentResult {
    /// Whether the interval is compatible with the bound: a lower bound
    /// fails only if the whole interval lies below it, an upper bound only
    /// if the whole interval lies above it.
    pub fn meets_bound(&self) -> bool {
        match self.bound_direction {
            Direction::Lower => self.wilson_hi >= self.theoretical_bound,
            Direction::Upper => self.wilson_lo <= self.theoretical_bound,
        }
    }

    /// One-line human summary.
    pub fn summary(&self) -> String {
        let mut line = format!(
            "{} / {} / {}: {}/{} = {:.4} [{:.4}, {:.4}], {} {} bound {:.6}",
            self.scheme,
            self.model,
            self.attack,
            self.successes,
            self.trials,
            self.empirical_rate,
            self.wilson_lo,
            self.wilson_hi,
            self.bound_kind,
            match self.bound_direction {
                Direction::Lower => "lower",
                Direction::Upper => "upper",
            },
            self.theoretical_bound,
        );
        for (name, v) in &self.extra_bounds {
            line.push_str(&format!(", {name} {v:.6}"));
        }
        line
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::Config(format!("unknown format `{s}`"))),
        }
    }
}

/// Flat CSV row; `extra_bounds` is encoded as `name=value` pairs joined by `;`.
#[derive(Debug, Serialize, Deserialize)]
struct CsvRow {
    scheme: String,
    model: String,
    attack: String,
    l: u32,
    t: u32,
    k: u32,
    modbits: Option<u32>,
    k1: Option<u32>,
    jbits: Option<u32>,
    trials: u64,
    successes: u64,
    aborts: u64,
    empirical_rate: f64,
    theoretical_bound: f64,
    bound_kind: String,
    bound_direction: Direction,
    extra_bounds: String,
    wilson_lo: f64,
    wilson_hi: f64,
    seed: u64,
    wall_ms: u64,
}

impl From<&ExperimentResult> for CsvRow {
    fn from(r: &ExperimentResult) -> Self {
        CsvRow {
            scheme: r.scheme.clone(),
            model: r.model.clone(),
            attack: r.attack.clone(),
            l: r.params.l,
            t: r.params.t,
            k: r.params.k,
            modbits: r.params.modbits,
            k1: r.params.k1,
            jbits: r.params.jbits,
            trials: r.trials,
            successes: r.successes,
            aborts: r.aborts,
            empirical_rate: r.empirical_rate,
            theoretical_bound: r.theoretical_bound,
            bound_kind: r.bound_kind.clone(),
            bound_direction: r.bound_direction,
            extra_bounds: r.extra_bounds.iter().map(|(k, v)| format!("{k}={v:?}")).collect::<Vec<_>>().join(";"),
            wilson_lo: r.wilson_lo,
            wilson_hi: r.wilson_hi,
            seed: r.seed,
            wall_ms: r.wall_ms,
        }
    }
}

impl TryFrom<CsvRow> for ExperimentResult {
    type Error = String;

    fn try_from(r: CsvRow) -> std::result::Result<Self, String> {
        let mut extra_bounds = BTreeMap::new();
        for pair in r.extra_bounds.split(';').filter(|p| !p.is_empty()) {
            let (name, v) = pair.split_once('=').ok_or_else(|| format!("malformed bound `{pair}`"))?;
            extra_bounds.insert(name.to_string(), v.parse::<f64>().map_err(|e| e.to_string())?);
        }
        Ok(ExperimentResult {
            scheme: r.scheme,
            model: r.model,
            attack: r.attack,
            params: ResultParams { l: r.l, t: r.t, k: r.k, modbits: r.modbits, k1: r.k1, jbits: r.jbits },
            trials: r.trials,
            successes: r.successes,
            aborts: r.aborts,
            empirical_rate: r.empirical_rate,
            theoretical_bound: r.theoretical_bound,
            bound_kind: r.bound_kind,
            bound_direction: r.bound_direction,
            extra_bounds,
            wilson_lo: r.wilson_lo,
            wilson_hi: r.wilson_hi,
            seed: r.seed,
            wall_ms: r.wall_ms,
        })
    }
}

fn io_error(path: &Path, e: impl ToString) -> Error {
    Error::Io { path: path.display().to_string(), message: e.to_string() }
}

/// Serialises `results` to a string: a JSON array, or CSV with a header row.
pub fn render_results(results: &[ExperimentResult], format: Format) -> Result<String> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(results).map_err(|e| Error::Config(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
            w.write_record(CSV_HEADER).map_err(|e| Error::Config(e.to_string()))?;
            for r in results {
                w.serialize(CsvRow::from(r)).map_err(|e| Error::Config(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| Error::Config(e.to_string()))
        }
    }
}

const CSV_HEADER: [&str; 21] = [
    "scheme",
    "model",
    "attack",
    "l",
    "t",
    "k",
    "modbits",
    "k1",
    "jbits",
    "trials",
    "successes",
    "aborts",
    "empirical_rate",
    "theoretical_bound",
    "bound_kind",
    "bound_direction",
    "extra_bounds",
    "wilson_lo",
    "wilson_hi",
    "seed",
    "wall_ms",
];

pub fn emit_results(results: &[ExperimentResult], format: Format, path: &Path) -> Result<()> {
    let body = render_results(results, format)?;
    let mut f = BufWriter::new(File::create(path).map_err(|e| io_error(path, e))?);
    f.write_all(body.as_bytes()).map_err(|e| io_error(path, e))?;
    f.flush().map_err(|e| io_error(path, e))
}

pub fn parse_results(path: &Path, format: Format) -> Result<Vec<ExperimentResult>> {
    let f = BufReader::new(File::open(path).map_err(|e| io_error(path, e))?);
    match format {
        Format::Json => serde_json::from_reader(f).map_err(|e| io_error(path, e)),
        Format::Csv => csv::Reader::from_reader(f)
            .deserialize::<CsvRow>()
            .map(|row| ExperimentResult::try_from(row.map_err(|e| io_error(path, e))?).map_err(|e| io_error(path, e)))
            .collect(),
    }
}
