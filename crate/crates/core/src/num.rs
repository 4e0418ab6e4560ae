//! Scalar abstractions.
//!
//! Probability arithmetic is written against [`Real`] (f32 or f64) and the
//! toy modular arithmetic of the signature schemes against [`Word`] (u32 or
//! u64). Exact rational quantities (biased coins, binomial success
//! probabilities) use integer numerators and denominators directly.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use serde::de::DeserializeOwned;
use serde::Serialize;

/// Floating point type used for probabilities and bounds.
pub trait Real:
    num_traits::Float + num_traits::FromPrimitive + num_traits::NumCast + Debug + Default + Send + Sync + 'static
{
    /// Lossy conversion from `f64`; every `Real` can represent the values we feed it.
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("f64 is representable")
    }

    /// Lossy conversion from an integer count.
    fn count(v: u64) -> Self {
        Self::from_u64(v).expect("count is representable")
    }

    fn to_f64_lossy(self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Unsigned machine word carrying modular arithmetic.
pub trait Word:
    num_traits::PrimInt
    + num_traits::Unsigned
    + num_traits::FromPrimitive
    + num_traits::ToPrimitive
    + Debug
    + Display
    + Default
    + Hash
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    const BITS: u32;

    /// `a * b mod m` without overflow.
    fn mul_mod(self, rhs: Self, m: Self) -> Self;

    fn from_u64_lossless(v: u64) -> Option<Self> {
        <Self as num_traits::FromPrimitive>::from_u64(v)
    }

    fn as_u64(self) -> u64 {
        num_traits::ToPrimitive::to_u64(&self).expect("word fits in u64")
    }

    /// Number of significant bits.
    fn bit_len(self) -> u32 {
        <Self as Word>::BITS - self.leading_zeros()
    }
}

impl Word for u32 {
    const BITS: u32 = 32;

    fn mul_mod(self, rhs: Self, m: Self) -> Self {
        ((self as u64 * rhs as u64) % m as u64) as u32
    }
}

impl Word for u64 {
    const BITS: u32 = 64;

    fn mul_mod(self, rhs: Self, m: Self) -> Self {
        ((self as u128 * rhs as u128) % m as u128) as u64
    }
}
