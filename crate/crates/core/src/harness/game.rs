use std::cell::RefCell;
use std::rc::Rc;

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::model::{ExtraQuery, Model};
use super::world::{World, WorldOracle};
use crate::attacks::{AttackOutcome, AttackResult};
use crate::error::{Error, Result};
use crate::num::Word;
use crate::oracle::{OracleAnswer, Params};
use crate::schemes::{SchemeInstance, SchemeKind, Signature};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Win,
    Lose,
    Abort,
}

/// Record of one EUF-CMA game.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct GameTranscript<W: Word> {
    pub signing: Vec<(u32, Signature<W>)>,
    pub extra: Vec<(ExtraQuery, OracleAnswer)>,
    pub hash_queries: u64,
    pub forgery: Option<(u32, Signature<W>)>,
    pub verdict: Verdict,
}

/// Challenger side of an EUF-CMA game in a weakened model.
///
/// The adversary reaches the random oracle, the signing oracle and the
/// model's extra oracle only through this handle.
pub struct Game<W: Word> {
    scheme: SchemeInstance<W, WorldOracle>,
    world: Rc<RefCell<World>>,
    model: Model,
    signer_rng: ChaCha8Rng,
    signing: Vec<(u32, Signature<W>)>,
    extra: Vec<(ExtraQuery, OracleAnswer)>,
    hash_queries: u64,
}

impl<W: Word> Game<W> {
    pub fn new(
        model: Model,
        world: Rc<RefCell<World>>,
        scheme: SchemeInstance<W, WorldOracle>,
        signer_rng: ChaCha8Rng,
    ) -> Self {
        Self { scheme, world, model, signer_rng, signing: Vec::new(), extra: Vec::new(), hash_queries: 0 }
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn scheme_kind(&self) -> SchemeKind {
        self.scheme.kind()
    }

    pub fn params(&self) -> Params {
        self.scheme.params()
    }

    pub fn message_bits(&self) -> u32 {
        self.scheme.message_bits()
    }

    pub fn salt_bits(&self) -> u32 {
        self.scheme.salt_bits()
    }

    /// Hash input the scheme builds for message `m` and salt `salt`.
    pub fn hash_input(&self, m: u32, salt: u32) -> u32 {
        self.scheme.hash_input(m, salt)
    }

    /// Random-oracle query.
    pub fn hash(&mut self, x: u32) -> Result<u32> {
        self.hash_queries += 1;
        self.world.borrow_mut().hash(x)
    }

    /// Signing-oracle query.
    pub fn sign(&mut self, m: u32) -> Result<Signature<W>> {
        let sig = self.scheme.sign(m, &mut self.signer_rng)?;
        self.signing.push((m, sig));
        Ok(sig)
    }

    /// Query to the model's extra oracle.
    pub fn extra(&mut self, query: ExtraQuery) -> Result<OracleAnswer> {
        let kind = query.kind();
        if !self.model.grants(kind) {
            return Err(Error::OracleNotGranted(kind.name(), self.model.name()));
        }
        let answer = self.world.borrow_mut().extra(query)?;
        self.extra.push((query, answer));
        Ok(answer)
    }

    pub fn was_signed(&self, m: u32) -> bool {
        self.signing.iter().any(|&(s, _)| s == m)
    }

    /// Scores the adversary's output: a forgery wins only if it verifies and
    /// its message was never submitted to the signing oracle.
    pub fn finish(mut self, outcome: &AttackOutcome<W>) -> GameTranscript<W> {
        let (forgery, verdict) = match outcome.result {
            AttackResult::Aborted => (None, Verdict::Abort),
            AttackResult::Forgery { message, signature } => {
                let verdict = if self.was_signed(message) {
                    Verdict::Lose
                } else {
                    match self.scheme.verify(message, &signature) {
                        Ok(true) => Verdict::Win,
                        _ => Verdict::Lose,
                    }
                };
                (Some((message, signature)), verdict)
            }
        };
        GameTranscript { signing: self.signing, extra: self.extra, hash_queries: self.hash_queries, forgery, verdict }
    }
}
