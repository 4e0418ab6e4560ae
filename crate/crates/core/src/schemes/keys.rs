use rand::Rng;
use serde::{Deserialize, Serialize};

use super::arith::{gcd, inv_mod, is_prime, pow_mod, random_prime, random_range};
use crate::error::{Error, Result};
use crate::num::Word;

/// RSA key pair with its factorisation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct RsaKey<W: Word> {
    pub n: W,
    pub e: W,
    pub d: W,
    pub p: W,
    pub q: W,
    pub phi: W,
    pub modbits: u32,
}

impl<W: Word> RsaKey<W> {
    pub fn from_primes(p: W, q: W, e: W) -> Result<Self> {
        if p == q || !is_prime(p) || !is_prime(q) {
            return Err(Error::KeyGeneration(format!("{p} and {q} are not distinct primes")));
        }
        let bits = p.bit_len() + q.bit_len();
        if bits > W::BITS {
            return Err(Error::KeyGeneration(format!("modulus of {bits} bits overflows the word")));
        }
        let n = p * q;
        let phi = (p - W::one()) * (q - W::one());
        let d = inv_mod(e, phi).ok_or_else(|| Error::KeyGeneration(format!("e = {e} not invertible mod {phi}")))?;
        Ok(Self { n, e, d, p, q, phi, modbits: n.bit_len() })
    }

    /// `x^e mod N`
    pub fn public(&self, x: W) -> W {
        pow_mod(x, self.e, self.n)
    }

    /// `y^d mod N`
    pub fn private(&self, y: W) -> W {
        pow_mod(y, self.d, self.n)
    }
}

/// Draws distinct primes of `⌈modbits/2⌉` and `⌊modbits/2⌋` bits whose
/// product has exactly `modbits` bits, then a uniform `e` invertible mod `φ(N)`.
pub fn rsa_gen<W: Word, R: Rng + ?Sized>(modbits: u32, rng: &mut R) -> Result<RsaKey<W>> {
    if modbits < 8 || modbits > W::BITS.min(63) {
        return Err(Error::InvalidParams(format!("modbits = {modbits} outside 8..={}", W::BITS.min(63))));
    }
    let (pbits, qbits) = (modbits.div_ceil(2), modbits / 2);
    let (p, q) = loop {
        let p: W = random_prime(pbits, rng)?;
        let q: W = random_prime(qbits, rng)?;
        if p != q && (p.as_u64() as u128 * q.as_u64() as u128) >> (modbits - 1) == 1 {
            break (p, q);
        }
    };
    let phi = (p - W::one()) * (q - W::one());
    let e = loop {
        let e = random_range(W::one(), phi, rng);
        if gcd(e, phi) == W::one() {
            break e;
        }
    };
    RsaKey::from_primes(p, q, e)
}

/// DSA domain parameters and key pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct DsaKey<W: Word> {
    pub p: W,
    pub q: W,
    pub g: W,
    pub x: W,
    pub y: W,
}

impl<W: Word> DsaKey<W> {
    pub fn from_parts(p: W, q: W, g: W, x: W) -> Result<Self> {
        if !is_prime(p) || !is_prime(q) || (p - W::one()) % q != W::zero() {
            return Err(Error::KeyGeneration(format!("q = {q} does not divide p - 1 = {}", p - W::one())));
        }
        if g <= W::one() || g >= p || pow_mod(g, q, p) != W::one() {
            return Err(Error::KeyGeneration(format!("g = {g} does not generate the order-{q} subgroup")));
        }
        if x >= q {
            return Err(Error::KeyGeneration("secret exponent out of range".into()));
        }
        Ok(Self { p, q, g, x, y: pow_mod(g, x, p) })
    }

    /// Fresh secret for the given group.
    pub fn generate<R: Rng + ?Sized>(group: (W, W, W), rng: &mut R) -> Result<Self> {
        let (p, q, g) = group;
        Self::from_parts(p, q, g, random_range(W::zero(), q, rng))
    }
}

/// Group generator: a `kbits`-bit prime `q`, a `jbits`-bit prime `p` with
/// `q | p - 1`, and a generator `g ≠ 1` of the order-`q` subgroup.
pub fn dsa_grgen<W: Word, R: Rng + ?Sized>(kbits: u32, jbits: u32, rng: &mut R) -> Result<(W, W, W)> {
    if kbits < 3 || jbits <= kbits || jbits > W::BITS.min(63) {
        return Err(Error::InvalidParams(format!("kbits = {kbits}, jbits = {jbits}")));
    }
    const GROUP_ATTEMPTS: u32 = 1_000;
    const COFACTOR_ATTEMPTS: u32 = 10_000;
    let lo = 1u64 << (jbits - 1);
    let hi = (1u64 << jbits) - 1;
    for _ in 0..GROUP_ATTEMPTS {
        let q: W = random_prime(kbits, rng)?;
        let q64 = q.as_u64();
        let (cmin, cmax) = ((lo - 1).div_ceil(q64), (hi - 1) / q64);
        if cmin > cmax {
            continue;
        }
        for _ in 0..COFACTOR_ATTEMPTS {
            let c = rng.random_range(cmin..=cmax);
            let p = q64 * c + 1;
            if is_prime(p) {
                let p = W::from_u64_lossless(p).expect("fits in word");
                let cof = (p - W::one()) / q;
                loop {
                    let h = random_range(W::from_u64_lossless(2).unwrap(), p - W::one(), rng);
                    let g = pow_mod(h, cof, p);
                    if g != W::one() {
                        return Ok((p, q, g));
                    }
                }
            }
        }
    }
    Err(Error::KeyGeneration(format!("no {jbits}-bit p found for {kbits}-bit q")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn textbook_rsa_key() {
        let k = RsaKey::from_primes(7u64, 11, 7).unwrap();
        assert_eq!((k.n, k.phi, k.d), (77, 60, 43));
        assert_eq!(k.private(2), 30);
        assert_eq!(k.public(30), 2);
        assert!(RsaKey::from_primes(7u64, 7, 5).is_err());
        assert!(RsaKey::from_primes(7u64, 11, 6).is_err());
        assert!(RsaKey::from_primes(8u64, 11, 7).is_err());
    }

    #[test]
    fn generated_rsa_keys_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for modbits in [8, 9, 16, 24, 32] {
            for _ in 0..20 {
                let k: RsaKey<u64> = rsa_gen(modbits, &mut rng).unwrap();
                assert_ne!(k.p, k.q);
                assert_eq!(k.n.bit_len(), modbits);
                assert_eq!(k.e.mul_mod(k.d, k.phi), 1);
                assert_eq!(gcd(k.e, k.phi), 1);
            }
        }
        let k: RsaKey<u64> = rsa_gen(16, &mut rng).unwrap();
        assert_eq!((k.p.bit_len(), k.q.bit_len()), (8, 8));
        assert!(rsa_gen::<u64, _>(7, &mut rng).is_err());
        assert!(rsa_gen::<u32, _>(32, &mut rng).is_ok());
    }

    #[test]
    fn textbook_dsa_group() {
        let key = DsaKey::from_parts(11u64, 5, 4, 3).unwrap();
        assert_eq!(key.y, 9);
        assert!(DsaKey::from_parts(11u64, 3, 4, 1).is_err());
        assert!(DsaKey::from_parts(11u64, 5, 1, 1).is_err());
        assert!(DsaKey::from_parts(11u64, 5, 4, 5).is_err());
    }

    #[test]
    fn generated_groups_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for (kbits, jbits) in [(3, 5), (8, 16), (8, 12), (16, 32)] {
            for _ in 0..10 {
                let (p, q, g): (u64, u64, u64) = dsa_grgen(kbits, jbits, &mut rng).unwrap();
                assert_eq!(q.bit_len(), kbits);
                assert_eq!(p.bit_len(), jbits);
                assert_eq!((p - 1) % q, 0);
                assert_ne!(g, 1);
                assert_eq!(pow_mod(g, q, p), 1);
                let key = DsaKey::generate((p, q, g), &mut rng).unwrap();
                assert!(key.x < q);
            }
        }
        assert!(dsa_grgen::<u64, _>(2, 8, &mut rng).is_err());
        assert!(dsa_grgen::<u64, _>(8, 8, &mut rng).is_err());
    }
}
