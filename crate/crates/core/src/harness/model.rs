use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The weakening oracles available beside the random oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OracleKind {
    Co,
    Spo,
    Fpo,
    CommonCpCo,
    CpCo,
    CpSpo,
    CpFpo,
}

impl OracleKind {
    pub fn name(self) -> &'static str {
        match self {
            OracleKind::Co => "CO",
            OracleKind::Spo => "SPO",
            OracleKind::Fpo => "FPO",
            OracleKind::CommonCpCo => "COMMON-CP-CO",
            OracleKind::CpCo => "CP-CO",
            OracleKind::CpSpo => "CP-SPO",
            OracleKind::CpFpo => "CP-FPO",
        }
    }
}

/// Random oracle model and its weakenings; each grants at most one extra oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    Rom,
    Ct,
    Spt,
    Fpt,
    CommonCpCt,
    CpCt,
    CpSpt,
    CpFpt,
}

impl Model {
    pub const ALL: [Model; 8] =
        [Model::Rom, Model::Ct, Model::Spt, Model::Fpt, Model::CommonCpCt, Model::CpCt, Model::CpSpt, Model::CpFpt];

    pub fn name(self) -> &'static str {
        match self {
            Model::Rom => "rom",
            Model::Ct => "ct",
            Model::Spt => "spt",
            Model::Fpt => "fpt",
            Model::CommonCpCt => "common-cp-ct",
            Model::CpCt => "cp-ct",
            Model::CpSpt => "cp-spt",
            Model::CpFpt => "cp-fpt",
        }
    }

    /// The extra oracle granted beside the random oracle.
    pub fn extra_oracle(self) -> Option<OracleKind> {
        match self {
            Model::Rom => None,
            Model::Ct => Some(OracleKind::Co),
            Model::Spt => Some(OracleKind::Spo),
            Model::Fpt => Some(OracleKind::Fpo),
            Model::CommonCpCt => Some(OracleKind::CommonCpCo),
            Model::CpCt => Some(OracleKind::CpCo),
            Model::CpSpt => Some(OracleKind::CpSpo),
            Model::CpFpt => Some(OracleKind::CpFpo),
        }
    }

    pub fn grants(self, oracle: OracleKind) -> bool {
        self.extra_oracle() == Some(oracle)
    }

    /// Whether the model treats the whole hash input as unprefixed.
    pub fn is_unprefixed(self) -> bool {
        matches!(self, Model::Ct | Model::Spt | Model::Fpt)
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Model::ALL.into_iter().find(|m| m.name() == s).ok_or_else(|| Error::Config(format!("unknown model `{s}`")))
    }
}

/// A query to one of the extra oracles. Inputs are flat `(m << t) | r` words.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExtraQuery {
    Co,
    Spo { x: u32 },
    Fpo { y: u32 },
    CommonCpCo { r: u32 },
    CpCo { r: u32, r2: u32 },
    CpSpo { x: u32, r2: u32 },
    CpFpo { y: u32, r: u32 },
}

impl ExtraQuery {
    pub fn kind(&self) -> OracleKind {
        match self {
            ExtraQuery::Co => OracleKind::Co,
            ExtraQuery::Spo { .. } => OracleKind::Spo,
            ExtraQuery::Fpo { .. } => OracleKind::Fpo,
            ExtraQuery::CommonCpCo { .. } => OracleKind::CommonCpCo,
            ExtraQuery::CpCo { .. } => OracleKind::CpCo,
            ExtraQuery::CpSpo { .. } => OracleKind::CpSpo,
            ExtraQuery::CpFpo { .. } => OracleKind::CpFpo,
        }
    }
}
