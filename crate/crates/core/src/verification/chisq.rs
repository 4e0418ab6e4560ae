use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::empirical::EmpiricalDistribution;
use crate::error::{Error, Result};

pub const SIGNIFICANCE: f64 = 1e-3;
pub const MIN_EXPECTED: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareOutcome {
    pub statistic: f64,
    pub critical: f64,
    pub dof: u64,
    pub reject: bool,
}

/// Pearson test of `e` against the uniform distribution on `0..support`.
pub fn chi_square_uniform(e: &EmpiricalDistribution<u64>, support: u64) -> Result<ChiSquareOutcome> {
    if support < 2 {
        return Err(Error::InvalidParams(format!("support size {support} leaves no degrees of freedom")));
    }
    if e.counts().keys().any(|&k| k >= support) {
        return Err(Error::SupportMismatch);
    }
    let expected = e.total() as f64 / support as f64;
    if expected < MIN_EXPECTED {
        return Err(Error::UnderSampled { expected, minimum: MIN_EXPECTED });
    }
    let observed: f64 = e.counts().values().map(|&o| (o as f64 - expected).powi(2) / expected).sum();
    let missing = (support - e.cells() as u64) as f64 * expected;
    let statistic = observed + missing;
    let dof = support - 1;
    let critical = ChiSquared::new(dof as f64)
        .map_err(|err| Error::InvalidParams(err.to_string()))?
        .inverse_cdf(1.0 - SIGNIFICANCE);
    Ok(ChiSquareOutcome { statistic, critical, dof, reject: statistic > critical })
}
