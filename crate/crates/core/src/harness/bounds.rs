//! Closed-form success and deviation bounds.
//!
//! `ell` is always the width of the message part that varies inside one
//! prefix class (the whole hash input when there is no prefix), so
//! `#M = 2^ell` and `#Y = 2^k`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::Real;

fn pow2<F: Real>(bits: u32) -> F {
    F::of(2.0).powi(bits as i32)
}

/// `ln #Y / ln ln #Y`
fn log_ratio<F: Real>(k: u32) -> Result<F> {
    if k < 2 {
        return Err(Error::InvalidParams(format!("ln ln 2^k is not positive for k = {k}")));
    }
    let ln_y = F::count(k as u64) * F::of(std::f64::consts::LN_2);
    Ok(ln_y / ln_y.ln())
}

/// `1 − e^{(1 − 2^ell) / 2^k}`: success floor of the collision and
/// second-preimage forgeries.
pub fn forgery_floor<F: Real>(ell: u32, k: u32) -> F {
    F::one() - ((F::one() - pow2::<F>(ell)) / pow2::<F>(k)).exp()
}

/// Preimage-count threshold `L` above which a class is overloaded.
pub fn max_load_threshold<F: Real>(ell: u32, k: u32) -> Result<F> {
    let base = F::of(5.0) * log_ratio::<F>(k)?;
    Ok(if ell >= k { base * pow2::<F>(ell) / pow2::<F>(k) } else { base })
}

/// Probability that the simplified simulators deviate from the exact ones
/// over `q` hash evaluations.
pub fn simulator_deviation<F: Real>(q: u64, ell: u32, k: u32) -> Result<F> {
    let (y, q) = (pow2::<F>(k), F::count(q));
    let spread = if ell >= k { y } else { pow2::<F>(ell) };
    Ok(log_ratio::<F>(k)? * F::of(10.0) * q / spread + F::one() / (y * y) + q / y)
}

/// Distance from uniform of the hash of a fresh adversarially chosen point
/// after `q` hash evaluations.
pub fn uniformity_distance<F: Real>(q: u64, ell: u32, k: u32) -> Result<F> {
    let scale = if ell >= k { pow2::<F>(k) } else { pow2::<F>(ell) };
    let q = F::count(q);
    Ok((F::of(5.0) * q + F::one() + F::of(4.0) * q * q / scale + F::of(20.0) * q * log_ratio::<F>(k)?) / scale)
}

/// Forgery ceiling for the salted schemes against CP-CO (excluding the
/// advantage of solving RSA).
pub fn salted_scheme_ceiling<F: Real>(q_sign: u64, q_h: u64, q_sc: u64, ell: u32, k: u32, k1: u32) -> Result<F> {
    let q1 = F::count(q_sign + q_h + q_sc + 1);
    let q2 = q_sign + q_h + 2 * q_sc + 1;
    let dev = simulator_deviation::<F>(q2, ell, k)?;
    Ok(F::one() / pow2::<F>(k) + F::count(q_sign) * F::count(q2) / pow2::<F>(k1) + q1 * dev)
}

/// Which side of the empirical rate a bound constrains.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Lower,
    Upper,
}

/// Named closed-form bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    /// Collision forgery on a deterministic scheme.
    CollisionForgery,
    /// Second-preimage forgery on a salted scheme.
    SecondPreimageForgery,
    /// Second-preimage forgery when `ell ≥ k ≥ 2`: `1 − e^{−1/2}`.
    SecondPreimageForgeryLarge,
    /// Salted schemes against chosen-prefix collisions.
    SaltedCollisionResistance,
    /// Deviation of the simplified simulators.
    SimulatorDeviation,
    /// Overloaded prefix class: `1/#Y²`.
    MaxLoad,
    /// Non-uniformity of a fresh adversarial hash.
    Uniformity,
}

/// Sizes a bound may depend on.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundSizes {
    pub ell: u32,
    pub k: u32,
    pub k1: u32,
    pub q_sign: u64,
    pub q_h: u64,
    pub q_sc: u64,
}

impl BoundKind {
    pub const ALL: [BoundKind; 7] = [
        BoundKind::CollisionForgery,
        BoundKind::SecondPreimageForgery,
        BoundKind::SecondPreimageForgeryLarge,
        BoundKind::SaltedCollisionResistance,
        BoundKind::SimulatorDeviation,
        BoundKind::MaxLoad,
        BoundKind::Uniformity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundKind::CollisionForgery => "collision-forgery",
            BoundKind::SecondPreimageForgery => "second-preimage-forgery",
            BoundKind::SecondPreimageForgeryLarge => "second-preimage-forgery-large",
            BoundKind::SaltedCollisionResistance => "salted-collision-resistance",
            BoundKind::SimulatorDeviation => "simulator-deviation",
            BoundKind::MaxLoad => "max-load",
            BoundKind::Uniformity => "uniformity",
        }
    }

    pub fn direction(self) -> Direction {
        match self {
            BoundKind::CollisionForgery | BoundKind::SecondPreimageForgery | BoundKind::SecondPreimageForgeryLarge => {
                Direction::Lower
            }
            _ => Direction::Upper,
        }
    }

    /// Whether the bound applies at these sizes.
    pub fn applies(self, s: &BoundSizes) -> bool {
        match self {
            BoundKind::SecondPreimageForgeryLarge => s.ell >= s.k && s.k >= 2,
            BoundKind::SaltedCollisionResistance | BoundKind::SimulatorDeviation | BoundKind::Uniformity => s.k >= 2,
            _ => true,
        }
    }

    /// Hash evaluations counted by the simulator bounds: `q_h + 2 q_sc`.
    fn simulator_queries(s: &BoundSizes) -> u64 {
        s.q_h + 2 * s.q_sc
    }

    pub fn evaluate<F: Real>(self, s: &BoundSizes) -> Result<F> {
        if !self.applies(s) {
            return Err(Error::InvalidParams(format!("{} does not apply at ell = {}, k = {}", self.name(), s.ell, s.k)));
        }
        match self {
            BoundKind::CollisionForgery | BoundKind::SecondPreimageForgery => Ok(forgery_floor(s.ell, s.k)),
            BoundKind::SecondPreimageForgeryLarge => Ok(F::one() - F::of(-0.5).exp()),
            BoundKind::SaltedCollisionResistance => {
                salted_scheme_ceiling(s.q_sign, s.q_h, s.q_sc, s.ell, s.k, s.k1)
            }
            BoundKind::SimulatorDeviation => simulator_deviation(Self::simulator_queries(s), s.ell, s.k),
            BoundKind::MaxLoad => Ok(F::one() / (pow2::<F>(s.k) * pow2::<F>(s.k))),
            BoundKind::Uniformity => uniformity_distance(Self::simulator_queries(s), s.ell, s.k),
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoundKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundKind::ALL.into_iter().find(|b| b.name() == s).ok_or_else(|| Error::UnknownBound(s.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forgery_floor_values() {
        assert!((forgery_floor::<f64>(8, 8) - 0.6306807194059595).abs() < 1e-12);
        assert!((forgery_floor::<f32>(8, 8) - 0.630_680_7).abs() < 1e-6);
        assert_eq!(forgery_floor::<f64>(32, 2), 1.0);
        assert_eq!(forgery_floor::<f64>(0, 8), 0.0);
        let mut prev = 0.0;
        for ell in 1..=32 {
            let b = forgery_floor::<f64>(ell, 8);
            assert!(b >= prev);
            prev = b;
        }
    }

    #[test]
    fn large_clause() {
        let s = BoundSizes { ell: 8, k: 8, ..Default::default() };
        let v: f64 = BoundKind::SecondPreimageForgeryLarge.evaluate(&s).unwrap();
        assert!((v - 0.3934693402873666).abs() < 1e-15);
        let small = BoundSizes { ell: 4, k: 8, ..Default::default() };
        assert!(BoundKind::SecondPreimageForgeryLarge.evaluate::<f64>(&small).is_err());
    }

    #[test]
    fn max_load() {
        let s = BoundSizes { ell: 8, k: 8, ..Default::default() };
        assert_eq!(BoundKind::MaxLoad.evaluate::<f64>(&s).unwrap(), 1.0 / 65536.0);
        let l: f64 = max_load_threshold(8, 8).unwrap();
        assert!((l - 16.186247856972894).abs() < 1e-9);
        let l1: f64 = max_load_threshold(1, 8).unwrap();
        assert!(l1 > 2.0 && l1 == l);
    }

    #[test]
    fn uniformity_at_zero_queries() {
        let v: f64 = uniformity_distance(0, 4, 4).unwrap();
        assert_eq!(v, 1.0 / 16.0);
        let w: f64 = uniformity_distance(0, 2, 4).unwrap();
        assert_eq!(w, 1.0 / 4.0);
    }

    #[test]
    fn names_round_trip() {
        for b in BoundKind::ALL {
            assert_eq!(b.name().parse::<BoundKind>().unwrap(), b);
        }
        assert_eq!("no-such-bound".parse::<BoundKind>(), Err(Error::UnknownBound("no-such-bound".into())));
    }

    #[test]
    fn log_ratio_needs_k_two() {
        assert!(simulator_deviation::<f64>(1, 8, 1).is_err());
        assert!(simulator_deviation::<f64>(1, 8, 2).is_ok());
    }
}
