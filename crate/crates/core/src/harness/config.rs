use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::bounds::{BoundKind, BoundSizes};
use super::model::{Model, OracleKind};
use crate::attacks::{AttackKind, AttackSpec};
use crate::error::{Error, Result};
use crate::oracle::{Params, TABLE_INPUT_LIMIT};
use crate::schemes::{BitString, SchemeKind};

/// How each game realises its hash function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    /// Exhaustive random table.
    Table,
    /// Exact lazy-sampling simulator.
    Lazy,
    /// Table for small inputs, lazy simulator otherwise.
    Auto,
}

/// Largest input width for which [`Backend::Auto`] still builds a table.
pub const AUTO_TABLE_BITS: u32 = 16;

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table" => Ok(Backend::Table),
            "lazy" => Ok(Backend::Lazy),
            "auto" => Ok(Backend::Auto),
            _ => Err(Error::Config(format!("unknown backend `{s}`"))),
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Table => "table",
            Backend::Lazy => "lazy",
            Backend::Auto => "auto",
        })
    }
}

/// One attack experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub scheme: SchemeKind,
    pub model: Model,
    pub attack: AttackSpec,
    /// Hash parameters; for the salted schemes the prefix is the salt.
    pub params: Params,
    pub modbits: u32,
    pub jbits: u32,
    pub pkcs_s: BitString,
    pub pkcs_alg: BitString,
    pub backend: Backend,
    pub trials: u64,
    pub seed: u64,
    /// Worker threads; 0 uses all cores.
    pub workers: usize,
    /// Record wall-clock time in results; off for byte-reproducible files.
    pub timing: bool,
}

impl ExperimentConfig {
    /// Defaults for everything but the scheme, model and attack.
    pub fn new(scheme: SchemeKind, model: Model, attack: AttackSpec, params: Params) -> Self {
        Self {
            scheme,
            model,
            attack,
            params,
            modbits: 16,
            jbits: 16,
            pkcs_s: BitString { value: 0b0001, len: 4 },
            pkcs_alg: BitString { value: 0b101, len: 3 },
            backend: Backend::Auto,
            trials: 10_000,
            seed: 42,
            workers: 0,
            timing: true,
        }
    }

    /// Salt width of the salted schemes.
    pub fn k1(&self) -> Option<u32> {
        self.scheme.is_salted().then_some(self.params.t)
    }

    /// Checks the configuration and resolves the backend.
    pub fn validate(&self) -> Result<Backend> {
        let p = self.params;
        let kind = self.attack.kind();
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        let usable = kind.usable_oracles();
        if !usable.iter().any(|&o| self.model.grants(o)) {
            return Err(Error::OracleNotGranted(usable[0].name(), self.model.name()));
        }
        if kind.targets_salted() != self.scheme.is_salted() {
            return Err(Error::Config(format!("attack {} cannot target {}", kind.name(), self.scheme)));
        }
        if self.model.is_unprefixed() && p.t != 0 {
            return Err(Error::Config(format!("model {} needs t = 0", self.model)));
        }
        match self.scheme {
            SchemeKind::RsaPfdh if p.t == 0 => return Err(Error::Config("rsa-pfdh needs a salt: t >= 1".into())),
            SchemeKind::RsaPfdhXor if p.t != p.k => {
                return Err(Error::Config(format!("rsa-pfdh-xor salts with k bits: t = {} must equal k = {}", p.t, p.k)))
            }
            _ => {}
        }
        if self.scheme == SchemeKind::Dsa {
            if p.k < 3 || self.jbits <= p.k || self.jbits > 62 {
                return Err(Error::Config(format!("dsa needs 3 <= k < jbits <= 62, got k = {}, jbits = {}", p.k, self.jbits)));
            }
        } else {
            let encoded = p.k + if self.scheme == SchemeKind::RsassaPkcs15 { self.pkcs_s.len + self.pkcs_alg.len } else { 0 };
            if !(8..=62).contains(&self.modbits) || encoded + 1 > self.modbits {
                return Err(Error::Config(format!(
                    "modbits = {} must lie in 8..=62 and exceed the {encoded}-bit encoding",
                    self.modbits
                )));
            }
        }
        match self.attack {
            AttackSpec::Collision { prefix } => p.check_prefix(prefix).map_err(|e| Error::Config(e.to_string()))?,
            AttackSpec::SecondPreimage { message } => {
                p.check_input(crate::oracle::Input::new(message, 0)).map_err(|e| Error::Config(e.to_string()))?
            }
            AttackSpec::Control { .. } => {}
        }
        self.resolve_backend()
    }

    fn resolve_backend(&self) -> Result<Backend> {
        let bits = self.params.input_bits();
        let lazy_ok = self.model.extra_oracle().is_none_or(|o| {
            matches!(o, OracleKind::CommonCpCo | OracleKind::CpCo) || (o == OracleKind::Co && self.params.t == 0)
        });
        match self.backend {
            Backend::Table if bits > TABLE_INPUT_LIMIT => {
                Err(Error::Config(format!("table backend holds at most {TABLE_INPUT_LIMIT} input bits, got {bits}")))
            }
            Backend::Lazy if !lazy_ok => Err(Error::Config(format!("the lazy backend cannot serve model {}", self.model))),
            Backend::Auto if bits <= AUTO_TABLE_BITS => Ok(Backend::Table),
            Backend::Auto if lazy_ok => Ok(Backend::Lazy),
            Backend::Auto if bits <= TABLE_INPUT_LIMIT => Ok(Backend::Table),
            Backend::Auto => Err(Error::Config(format!("no backend serves model {} at {bits} input bits", self.model))),
            b => Ok(b),
        }
    }

    /// The bound the empirical rate is judged against, and further bounds reported beside it.
    pub fn bounds(&self) -> (BoundKind, Vec<BoundKind>) {
        match self.attack.kind() {
            AttackKind::Collision => (BoundKind::CollisionForgery, vec![]),
            AttackKind::SecondPreimage => {
                let large = BoundKind::SecondPreimageForgeryLarge;
                let extra = if large.applies(&self.bound_sizes()) { vec![large] } else { vec![] };
                (BoundKind::SecondPreimageForgery, extra)
            }
            AttackKind::Control => (BoundKind::SaltedCollisionResistance, vec![]),
        }
    }

    /// Sizes fed to the bounds. The control probe makes at most `budget`
    /// signing and `budget` CP-CO queries and no direct hash queries.
    pub fn bound_sizes(&self) -> BoundSizes {
        let budget = match self.attack {
            AttackSpec::Control { budget } => budget as u64,
            _ => 0,
        };
        BoundSizes { ell: self.params.ell, k: self.params.k, k1: self.params.t, q_sign: budget, q_h: 0, q_sc: budget }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fdh() -> ExperimentConfig {
        ExperimentConfig::new(
            SchemeKind::RsaFdh,
            Model::CommonCpCt,
            AttackSpec::Collision { prefix: 0 },
            Params::new(8, 4, 8).unwrap(),
        )
    }

    #[test]
    fn valid_default() {
        assert_eq!(fdh().validate().unwrap(), Backend::Table);
    }

    #[test]
    fn oracle_mismatch() {
        let mut c = fdh();
        c.model = Model::CpSpt;
        assert_eq!(c.validate(), Err(Error::OracleNotGranted("COMMON-CP-CO", "cp-spt")));
        c.model = Model::Rom;
        assert!(c.validate().is_err());
    }

    #[test]
    fn attack_scheme_mismatch() {
        let mut c = fdh();
        c.scheme = SchemeKind::RsaPfdh;
        assert!(matches!(c.validate(), Err(Error::Config(_))));
    }

    #[test]
    fn unprefixed_models_need_t_zero() {
        let mut c = fdh();
        c.model = Model::Ct;
        assert!(c.validate().is_err());
        c.params = Params::new(8, 0, 8).unwrap();
        assert!(c.validate().is_ok());
    }

    #[test]
    fn encoding_must_fit() {
        let mut c = fdh();
        c.modbits = 8;
        assert!(c.validate().is_err());
        c.modbits = 9;
        assert!(c.validate().is_ok());
        c.scheme = SchemeKind::RsassaPkcs15;
        c.modbits = 15;
        assert!(c.validate().is_err());
        c.modbits = 16;
        assert!(c.validate().is_ok());
    }

    #[test]
    fn backend_resolution() {
        let mut c = ExperimentConfig::new(
            SchemeKind::RsaPfdh,
            Model::CpCt,
            AttackSpec::Control { budget: 64 },
            Params::new(8, 16, 8).unwrap(),
        );
        assert_eq!(c.validate().unwrap(), Backend::Lazy);
        c.backend = Backend::Table;
        assert_eq!(c.validate().unwrap(), Backend::Table);
        c.params = Params::new(12, 16, 8).unwrap();
        assert!(c.validate().is_err());
        c.model = Model::CpSpt;
        c.attack = AttackSpec::SecondPreimage { message: 0 };
        c.backend = Backend::Lazy;
        c.params = Params::new(8, 8, 8).unwrap();
        assert!(c.validate().is_err());
        c.backend = Backend::Auto;
        assert_eq!(c.validate().unwrap(), Backend::Table);
    }

    #[test]
    fn second_preimage_reports_both_clauses() {
        let c = ExperimentConfig::new(
            SchemeKind::RsaPfdh,
            Model::CpSpt,
            AttackSpec::SecondPreimage { message: 0 },
            Params::new(8, 4, 8).unwrap(),
        );
        let (main, extra) = c.bounds();
        assert_eq!(main, BoundKind::SecondPreimageForgery);
        assert_eq!(extra, vec![BoundKind::SecondPreimageForgeryLarge]);
    }
}
