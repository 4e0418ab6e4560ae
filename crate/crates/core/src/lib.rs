//! Weakened random oracle models: ideal oracles, lazy-sampling simulators,
//! toy signature schemes, generic attacks and the experiment harness.

pub mod attacks;
pub mod error;
pub mod harness;
pub mod num;
pub mod oracle;
pub mod schemes;
pub mod simulation;
pub mod verification;

pub use error::{Error, Result};

/// Distributions with double-precision masses.
pub type Distribution64<K> = simulation::Distribution<K, f64>;
/// RSA keys over 64-bit words.
pub type RsaKey64 = schemes::RsaKey<u64>;
/// DSA keys over 64-bit words.
pub type DsaKey64 = schemes::DsaKey<u64>;
/// Signatures over 64-bit words.
pub type Signature64 = schemes::Signature<u64>;
/// Scheme instances over 64-bit words.
pub type Scheme64<O> = schemes::SchemeInstance<u64, O>;
