use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::arith::{inv_mod, pow_mod, random_range};
use super::keys::{DsaKey, RsaKey};
use crate::error::{Error, Result};
use crate::num::Word;
use crate::oracle::{check_width, HashOracle, Input, Params};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeKind {
    RsaFdh,
    RsaPfdh,
    RsaPfdhXor,
    RsassaPkcs15,
    Dsa,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 5] =
        [SchemeKind::RsaFdh, SchemeKind::RsaPfdh, SchemeKind::RsaPfdhXor, SchemeKind::RsassaPkcs15, SchemeKind::Dsa];

    pub fn name(self) -> &'static str {
        match self {
            SchemeKind::RsaFdh => "rsa-fdh",
            SchemeKind::RsaPfdh => "rsa-pfdh",
            SchemeKind::RsaPfdhXor => "rsa-pfdh-xor",
            SchemeKind::RsassaPkcs15 => "rsassa-pkcs15",
            SchemeKind::Dsa => "dsa",
        }
    }

    /// Whether the signer salts the hash input.
    pub fn is_salted(self) -> bool {
        matches!(self, SchemeKind::RsaPfdh | SchemeKind::RsaPfdhXor)
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SchemeKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown scheme `{s}`")))
    }
}

/// Fixed-width bit string, most significant bit first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct BitString {
    pub value: u64,
    pub len: u32,
}

impl BitString {
    pub fn new(value: u64, len: u32) -> Result<Self> {
        if len > 63 {
            return Err(Error::InvalidParams(format!("bit string of length {len}")));
        }
        check_width("bit string", value, len)?;
        Ok(Self { value, len })
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut value = 0u64;
        for c in s.chars() {
            let bit = match c {
                '0' => 0,
                '1' => 1,
                _ => return Err(Error::Config(format!("`{s}` is not a bit string"))),
            };
            value = value.checked_mul(2).ok_or_else(|| Error::Config(format!("`{s}` is too long")))? | bit;
        }
        BitString::new(value, s.len() as u32).map_err(|e| Error::Config(e.to_string()))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in (0..self.len).rev() {
            write!(f, "{}", (self.value >> i) & 1)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(bound = "")]
pub enum Signature<W: Word> {
    Fdh(W),
    Pfdh { salt: u32, x: W },
    PfdhXor { salt: u32, x: W },
    Pkcs(W),
    Dsa { r: W, s: W },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
pub enum KeyMaterial<W: Word> {
    Rsa(RsaKey<W>),
    Dsa(DsaKey<W>),
}

/// Sign/verify pair closed over a key and a hash-oracle handle.
///
/// Every sign and every verify issues exactly one hash query.
pub struct SchemeInstance<W: Word, O: HashOracle> {
    kind: SchemeKind,
    key: KeyMaterial<W>,
    prefix: BitString,
    oracle: O,
}

fn embeds<W: Word>(bits: u32, n: W) -> Result<()> {
    if bits >= W::BITS || (W::one() << bits as usize) >= n {
        return Err(Error::EncodingOverflow { bits, modulus: n.as_u64() });
    }
    Ok(())
}

fn word<W: Word>(v: u64) -> W {
    W::from_u64_lossless(v).expect("value fits in word")
}

impl<W: Word, O: HashOracle> SchemeInstance<W, O> {
    pub fn rsa_fdh(key: RsaKey<W>, oracle: O) -> Result<Self> {
        embeds(oracle.params().k, key.n)?;
        Ok(Self { kind: SchemeKind::RsaFdh, key: KeyMaterial::Rsa(key), prefix: BitString::default(), oracle })
    }

    /// PFDH with a `k1`-bit salt; the oracle's prefix width must be `k1`.
    pub fn rsa_pfdh(key: RsaKey<W>, oracle: O, k1: u32) -> Result<Self> {
        let p = oracle.params();
        if p.t != k1 || k1 == 0 {
            return Err(Error::InvalidParams(format!("salt width k1 = {k1} must equal the prefix width t = {}", p.t)));
        }
        embeds(p.k, key.n)?;
        Ok(Self { kind: SchemeKind::RsaPfdh, key: KeyMaterial::Rsa(key), prefix: BitString::default(), oracle })
    }

    /// PFDH⊕: the salt is `k` bits, so the oracle's prefix width must be `k`.
    pub fn rsa_pfdh_xor(key: RsaKey<W>, oracle: O) -> Result<Self> {
        let p = oracle.params();
        if p.t != p.k {
            return Err(Error::InvalidParams(format!("salt width t = {} must equal k = {}", p.t, p.k)));
        }
        embeds(p.k, key.n)?;
        Ok(Self { kind: SchemeKind::RsaPfdhXor, key: KeyMaterial::Rsa(key), prefix: BitString::default(), oracle })
    }

    /// Encodes `s ‖ alg_id ‖ h(m)`; the full encoding must embed below `N`.
    pub fn rsassa_pkcs15(key: RsaKey<W>, oracle: O, s: BitString, alg_id: BitString) -> Result<Self> {
        let bits = s.len + alg_id.len + oracle.params().k;
        embeds(bits, key.n)?;
        let prefix = BitString::new((s.value << alg_id.len) | alg_id.value, s.len + alg_id.len)?;
        Ok(Self { kind: SchemeKind::RsassaPkcs15, key: KeyMaterial::Rsa(key), prefix, oracle })
    }

    /// DSA; the hash width must equal the bit length of `q`.
    pub fn dsa(key: DsaKey<W>, oracle: O) -> Result<Self> {
        let k = oracle.params().k;
        if key.q.bit_len() != k {
            return Err(Error::InvalidParams(format!("q has {} bits but the hash outputs {k}", key.q.bit_len())));
        }
        Ok(Self { kind: SchemeKind::Dsa, key: KeyMaterial::Dsa(key), prefix: BitString::default(), oracle })
    }

    pub fn kind(&self) -> SchemeKind {
        self.kind
    }

    pub fn key(&self) -> &KeyMaterial<W> {
        &self.key
    }

    pub fn params(&self) -> Params {
        self.oracle.params()
    }

    pub fn oracle(&self) -> &O {
        &self.oracle
    }

    pub fn oracle_mut(&mut self) -> &mut O {
        &mut self.oracle
    }

    pub fn into_oracle(self) -> O {
        self.oracle
    }

    /// Width of signable messages.
    pub fn message_bits(&self) -> u32 {
        let p = self.params();
        if self.kind.is_salted() {
            p.ell
        } else {
            p.input_bits()
        }
    }

    /// Width of the salt, zero for deterministic schemes.
    pub fn salt_bits(&self) -> u32 {
        if self.kind.is_salted() {
            self.params().t
        } else {
            0
        }
    }

    /// Hash input carrying message `m` (and `salt` for the salted schemes).
    pub fn hash_input(&self, m: u32, salt: u32) -> u32 {
        if self.kind.is_salted() {
            self.params().join(Input::new(m, salt))
        } else {
            m
        }
    }

    fn rsa(&self) -> &RsaKey<W> {
        match &self.key {
            KeyMaterial::Rsa(k) => k,
            KeyMaterial::Dsa(_) => unreachable!("RSA scheme holds an RSA key"),
        }
    }

    pub fn sign<R: Rng + ?Sized>(&mut self, m: u32, rng: &mut R) -> Result<Signature<W>> {
        check_width("message", m as u64, self.message_bits())?;
        match self.kind {
            SchemeKind::RsaPfdh | SchemeKind::RsaPfdhXor => {
                let salt = rng.random_range(0..1u64 << self.salt_bits()) as u32;
                self.sign_with_salt(m, salt)
            }
            SchemeKind::Dsa => {
                let KeyMaterial::Dsa(key) = self.key else { unreachable!("DSA scheme holds a DSA key") };
                let z = word::<W>(self.oracle.hash(m)? as u64) % key.q;
                loop {
                    let kappa = random_range(W::zero(), key.q, rng);
                    if let Some((r, s)) = dsa_sign_digest(&key, z, kappa) {
                        return Ok(Signature::Dsa { r, s });
                    }
                }
            }
            _ => self.sign_with_salt(m, 0),
        }
    }

    /// Deterministic RSA signing with a caller-chosen salt (ignored when unsalted).
    pub fn sign_with_salt(&mut self, m: u32, salt: u32) -> Result<Signature<W>> {
        check_width("message", m as u64, self.message_bits())?;
        check_width("salt", salt as u64, self.salt_bits())?;
        let w = self.oracle.hash(self.hash_input(m, salt))? as u64;
        let k = self.params().k;
        let key = *self.rsa();
        Ok(match self.kind {
            SchemeKind::RsaFdh => Signature::Fdh(key.private(word(w))),
            SchemeKind::RsaPfdh => Signature::Pfdh { salt, x: key.private(word(w)) },
            SchemeKind::RsaPfdhXor => Signature::PfdhXor { salt, x: key.private(word(w ^ salt as u64)) },
            SchemeKind::RsassaPkcs15 => Signature::Pkcs(key.private(word((self.prefix.value << k) | w))),
            SchemeKind::Dsa => return Err(Error::Precondition("DSA signing needs a nonce")),
        })
    }

    pub fn verify(&mut self, m: u32, sig: &Signature<W>) -> Result<bool> {
        check_width("message", m as u64, self.message_bits())?;
        let k = self.params().k;
        match (self.kind, *sig) {
            (SchemeKind::RsaFdh, Signature::Fdh(x)) => {
                let w = self.oracle.hash(m)? as u64;
                let key = self.rsa();
                Ok(x < key.n && key.public(x) == word(w))
            }
            (SchemeKind::RsaPfdh, Signature::Pfdh { salt, x }) | (SchemeKind::RsaPfdhXor, Signature::PfdhXor { salt, x }) => {
                if check_width("salt", salt as u64, self.salt_bits()).is_err() {
                    return Ok(false);
                }
                let mut w = self.oracle.hash(self.hash_input(m, salt))? as u64;
                if self.kind == SchemeKind::RsaPfdhXor {
                    w ^= salt as u64;
                }
                let key = self.rsa();
                Ok(x < key.n && key.public(x) == word(w))
            }
            (SchemeKind::RsassaPkcs15, Signature::Pkcs(x)) => {
                let w = self.oracle.hash(m)? as u64;
                let key = self.rsa();
                if x >= key.n {
                    return Ok(false);
                }
                let y = key.public(x).as_u64();
                let total = self.prefix.len + k;
                Ok(y >> total == 0 && y >> k == self.prefix.value && y & ((1 << k) - 1) == w)
            }
            (SchemeKind::Dsa, Signature::Dsa { r, s }) => {
                let KeyMaterial::Dsa(key) = self.key else { unreachable!("DSA scheme holds a DSA key") };
                if r == W::zero() || r >= key.q || s == W::zero() || s >= key.q {
                    return Err(Error::SignatureRange);
                }
                let z = word::<W>(self.oracle.hash(m)? as u64) % key.q;
                dsa_verify_digest(&key, z, r, s)
            }
            _ => Ok(false),
        }
    }
}

/// `(r, s)` for digest `z` under nonce `κ`, or `None` when `κ`, `r` or `s` is zero.
pub fn dsa_sign_digest<W: Word>(key: &DsaKey<W>, z: W, kappa: W) -> Option<(W, W)> {
    if kappa == W::zero() {
        return None;
    }
    let r = pow_mod(key.g, kappa, key.p) % key.q;
    if r == W::zero() {
        return None;
    }
    let kinv = inv_mod(kappa, key.q)?;
    let s = kinv.mul_mod((z % key.q + key.x.mul_mod(r, key.q)) % key.q, key.q);
    if s == W::zero() {
        return None;
    }
    Some((r, s))
}

/// Checks `(g^{zw} y^{rw} mod p) mod q = r` with `w = s^{-1} mod q`.
pub fn dsa_verify_digest<W: Word>(key: &DsaKey<W>, z: W, r: W, s: W) -> Result<bool> {
    if r == W::zero() || r >= key.q || s == W::zero() || s >= key.q {
        return Err(Error::SignatureRange);
    }
    let w = inv_mod(s, key.q).ok_or(Error::SignatureRange)?;
    let u1 = (z % key.q).mul_mod(w, key.q);
    let u2 = r.mul_mod(w, key.q);
    let v = pow_mod(key.g, u1, key.p).mul_mod(pow_mod(key.y, u2, key.p), key.p) % key.q;
    Ok(v == r)
}
