//! Generic forgery adversaries against the EUF-CMA game.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::{ExtraQuery, Game, OracleKind};
use crate::num::Word;
use crate::oracle::OracleAnswer;
use crate::schemes::Signature;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(bound = "")]
pub enum AttackResult<W: Word> {
    Forgery { message: u32, signature: Signature<W> },
    Aborted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct AttackOutcome<W: Word> {
    pub result: AttackResult<W>,
    /// Extra-oracle interactions in order.
    pub transcript: Vec<(ExtraQuery, OracleAnswer)>,
}

impl<W: Word> AttackOutcome<W> {
    fn aborted(transcript: Vec<(ExtraQuery, OracleAnswer)>) -> Self {
        Self { result: AttackResult::Aborted, transcript }
    }

    fn forgery(message: u32, signature: Signature<W>, transcript: Vec<(ExtraQuery, OracleAnswer)>) -> Self {
        Self { result: AttackResult::Forgery { message, signature }, transcript }
    }
}

/// Anything that can play the adversary's side of a game.
pub trait Adversary<W: Word>: Sync {
    fn attack(&self, game: &mut Game<W>, rng: &mut ChaCha8Rng) -> Result<AttackOutcome<W>>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AttackKind {
    Collision,
    SecondPreimage,
    Control,
}

impl AttackKind {
    pub const ALL: [AttackKind; 3] = [AttackKind::Collision, AttackKind::SecondPreimage, AttackKind::Control];

    pub fn name(self) -> &'static str {
        match self {
            AttackKind::Collision => "collision",
            AttackKind::SecondPreimage => "second-preimage",
            AttackKind::Control => "control",
        }
    }

    /// Extra oracles the attack can run on, in order of preference.
    pub fn usable_oracles(self) -> &'static [OracleKind] {
        match self {
            AttackKind::Collision => &[OracleKind::CommonCpCo, OracleKind::CpCo, OracleKind::Co],
            AttackKind::SecondPreimage => &[OracleKind::CpSpo],
            AttackKind::Control => &[OracleKind::CpCo],
        }
    }

    /// Whether the attack targets the salted schemes (otherwise the deterministic ones).
    pub fn targets_salted(self) -> bool {
        !matches!(self, AttackKind::Collision)
    }
}

impl fmt::Display for AttackKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AttackKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AttackKind::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown attack `{s}`")))
    }
}

/// A configured attack.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AttackSpec {
    Collision { prefix: u32 },
    SecondPreimage { message: u32 },
    Control { budget: u32 },
}

impl AttackSpec {
    pub fn kind(&self) -> AttackKind {
        match self {
            AttackSpec::Collision { .. } => AttackKind::Collision,
            AttackSpec::SecondPreimage { .. } => AttackKind::SecondPreimage,
            AttackSpec::Control { .. } => AttackKind::Control,
        }
    }
}

impl<W: Word> Adversary<W> for AttackSpec {
    fn attack(&self, game: &mut Game<W>, rng: &mut ChaCha8Rng) -> Result<AttackOutcome<W>> {
        match *self {
            AttackSpec::Collision { prefix } => attack_collision_forge(game, prefix),
            AttackSpec::SecondPreimage { message } => attack_second_preimage_forge(game, message),
            AttackSpec::Control { budget } => security_control_probe(game, budget, rng),
        }
    }
}

/// Obtains a collision `(m‖p, m'‖p)` from the extra oracle, has the first
/// string signed and outputs the second with the same signature.
///
/// Uses COMMON-CP-CO or CP-CO on `(p, p)` when granted, else plain CO.
pub fn attack_collision_forge<W: Word>(game: &mut Game<W>, prefix: u32) -> Result<AttackOutcome<W>> {
    if game.scheme_kind().is_salted() {
        return Err(Error::Precondition("collision forgery needs a deterministic hash input"));
    }
    let model = game.model();
    let query = if model.grants(OracleKind::CommonCpCo) {
        ExtraQuery::CommonCpCo { r: prefix }
    } else if model.grants(OracleKind::CpCo) {
        ExtraQuery::CpCo { r: prefix, r2: prefix }
    } else {
        ExtraQuery::Co
    };
    let answer = game.extra(query)?;
    let transcript = vec![(query, answer)];
    let OracleAnswer::Pair(a, b) = answer else {
        return Ok(AttackOutcome::aborted(transcript));
    };
    let params = game.params();
    let (m, forged) = (params.join(a), params.join(b));
    let signature = game.sign(m)?;
    Ok(AttackOutcome::forgery(forged, signature, transcript))
}

/// Has `message` signed under salt `r`, asks CP-SPO for another preimage of
/// `h(message‖r)` with prefix `r` and reuses the signature.
pub fn attack_second_preimage_forge<W: Word>(game: &mut Game<W>, message: u32) -> Result<AttackOutcome<W>> {
    if !game.scheme_kind().is_salted() {
        return Err(Error::Precondition("second-preimage forgery targets the salted schemes"));
    }
    let signature = game.sign(message)?;
    let salt = match signature {
        Signature::Pfdh { salt, .. } | Signature::PfdhXor { salt, .. } => salt,
        _ => return Err(Error::Precondition("salted scheme returned an unsalted signature")),
    };
    let query = ExtraQuery::CpSpo { x: game.hash_input(message, salt), r2: salt };
    let answer = game.extra(query)?;
    let transcript = vec![(query, answer)];
    match answer {
        OracleAnswer::Single(other) => Ok(AttackOutcome::forgery(other.m, signature, transcript)),
        _ => Ok(AttackOutcome::aborted(transcript)),
    }
}

/// Collision-replay strategy against the salted schemes: each round asks
/// CP-CO for a same-salt collision under a random salt, has its first
/// message signed, and forges the partner if the signer happened to pick a
/// salt for which a collision on the signed message is known.
pub fn security_control_probe<W: Word>(
    game: &mut Game<W>,
    budget: u32,
    rng: &mut ChaCha8Rng,
) -> Result<AttackOutcome<W>> {
    if !game.scheme_kind().is_salted() {
        return Err(Error::Precondition("the control probe targets the salted schemes"));
    }
    let salts = 1u64 << game.salt_bits();
    let mut transcript = Vec::new();
    let mut collisions: Vec<(u32, u32, u32)> = Vec::new();
    for _ in 0..budget {
        let r = rng.random_range(0..salts) as u32;
        let query = ExtraQuery::CpCo { r, r2: r };
        let answer = game.extra(query)?;
        transcript.push((query, answer));
        let OracleAnswer::Pair(a, b) = answer else { continue };
        collisions.push((a.m, b.m, r));
        let signature = game.sign(a.m)?;
        let salt = match signature {
            Signature::Pfdh { salt, .. } | Signature::PfdhXor { salt, .. } => salt,
            _ => return Err(Error::Precondition("salted scheme returned an unsalted signature")),
        };
        let hit = collisions.iter().find(|&&(m, partner, r)| m == a.m && r == salt && !game.was_signed(partner));
        if let Some(&(_, partner, _)) = hit {
            return Ok(AttackOutcome::forgery(partner, signature, transcript));
        }
    }
    Ok(AttackOutcome::aborted(transcript))
}
