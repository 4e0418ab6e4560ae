use rand::Rng;
use serde::{Deserialize, Serialize};

use super::trials::{stream, trial_seed, StreamId};
use crate::error::Result;
use crate::oracle::{FunctionTable, Params, TableOracle};
use crate::schemes::{dsa_grgen, rsa_gen, BitString, DsaKey, SchemeInstance, SchemeKind};

/// Sizes for the round-trip check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrectnessSizes {
    pub ell: u32,
    pub k: u32,
    /// Salt width of the plain salted scheme.
    pub k1: u32,
    pub modbits: u32,
    pub jbits: u32,
}

impl Default for CorrectnessSizes {
    fn default() -> Self {
        Self { ell: 8, k: 8, k1: 4, modbits: 16, jbits: 16 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrectnessReport {
    pub scheme: SchemeKind,
    pub messages: u64,
    pub failures: u64,
}

/// Hash parameters each scheme uses at the given sizes.
pub fn scheme_params(scheme: SchemeKind, s: &CorrectnessSizes) -> Result<Params> {
    match scheme {
        SchemeKind::RsaPfdh => Params::new(s.ell, s.k1, s.k),
        SchemeKind::RsaPfdhXor => Params::new(s.ell, s.k, s.k),
        _ => Params::new(s.ell, 0, s.k),
    }
}

/// Signs and verifies `messages` random messages, each under a fresh key,
/// against one random hash function.
pub fn correctness_check(scheme: SchemeKind, sizes: &CorrectnessSizes, messages: u64, seed: u64) -> Result<CorrectnessReport> {
    let params = scheme_params(scheme, sizes)?;
    let base = trial_seed(seed, scheme as u64);
    let table = FunctionTable::random(params, &mut stream(base, StreamId::World))?;
    let mut keys = stream(base, StreamId::Keys);
    let mut signer = stream(base, StreamId::Signer);
    let mut pick = stream(base, StreamId::Adversary);
    let (s, alg): (BitString, BitString) = ("0001".parse()?, "101".parse()?);
    let mut failures = 0;
    for _ in 0..messages {
        let oracle = TableOracle(&table);
        let mut inst = match scheme {
            SchemeKind::Dsa => {
                let group = dsa_grgen::<u64, _>(sizes.k, sizes.jbits, &mut keys)?;
                SchemeInstance::dsa(DsaKey::generate(group, &mut keys)?, oracle)?
            }
            SchemeKind::RsaFdh => SchemeInstance::rsa_fdh(rsa_gen(sizes.modbits, &mut keys)?, oracle)?,
            SchemeKind::RsaPfdh => SchemeInstance::rsa_pfdh(rsa_gen(sizes.modbits, &mut keys)?, oracle, sizes.k1)?,
            SchemeKind::RsaPfdhXor => SchemeInstance::rsa_pfdh_xor(rsa_gen(sizes.modbits, &mut keys)?, oracle)?,
            SchemeKind::RsassaPkcs15 => {
                SchemeInstance::rsassa_pkcs15(rsa_gen(sizes.modbits, &mut keys)?, oracle, s, alg)?
            }
        };
        let m = pick.random_range(0..1u64 << inst.message_bits()) as u32;
        let sig = inst.sign(m, &mut signer)?;
        if !inst.verify(m, &sig)? {
            failures += 1;
        }
    }
    Ok(CorrectnessReport { scheme, messages, failures })
}
