//! Modular arithmetic on machine words.

use rand::Rng;

use crate::error::{Error, Result};
use crate::num::Word;

pub fn pow_mod<W: Word>(base: W, mut exp: W, m: W) -> W {
    if m == W::one() {
        return W::zero();
    }
    let mut base = base % m;
    let mut acc = W::one();
    while exp > W::zero() {
        if exp & W::one() == W::one() {
            acc = acc.mul_mod(base, m);
        }
        base = base.mul_mod(base, m);
        exp = exp >> 1;
    }
    acc
}

pub fn gcd<W: Word>(mut a: W, mut b: W) -> W {
    while b != W::zero() {
        (a, b) = (b, a % b);
    }
    a
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod<W: Word>(a: W, m: W) -> Option<W> {
    let m64 = m.as_u64() as i128;
    if m64 == 0 {
        return None;
    }
    let (mut r0, mut r1) = (m64, (a.as_u64() as i128) % m64);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    W::from_u64_lossless(s0.rem_euclid(m64) as u64)
}

/// Deterministic Miller-Rabin, exact for every 64-bit input.
pub fn is_prime<W: Word>(n: W) -> bool {
    let n = n.as_u64();
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = x.mul_mod(x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Uniform element of `[lo, hi)`.
pub fn random_range<W: Word, R: Rng + ?Sized>(lo: W, hi: W, rng: &mut R) -> W {
    W::from_u64_lossless(rng.random_range(lo.as_u64()..hi.as_u64())).expect("value below hi")
}

/// Uniform prime with exactly `bits` significant bits.
pub fn random_prime<W: Word, R: Rng + ?Sized>(bits: u32, rng: &mut R) -> Result<W> {
    if !(2..=W::BITS).contains(&bits) {
        return Err(Error::InvalidParams(format!("prime width {bits} outside 2..={}", W::BITS)));
    }
    let lo = 1u64 << (bits - 1);
    let hi = if bits == 64 { u64::MAX } else { (1u64 << bits) - 1 };
    loop {
        let c = rng.random_range(lo..=hi);
        if is_prime(c) {
            return Ok(W::from_u64_lossless(c).expect("fits in word"));
        }
    }
}
