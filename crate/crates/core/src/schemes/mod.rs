//! Toy RSA and DSA signature schemes parameterised over a hash-oracle handle.

mod arith;
mod instance;
mod keys;

pub use arith::{gcd, inv_mod, is_prime, pow_mod, random_prime};
pub use instance::{dsa_sign_digest, dsa_verify_digest, BitString, KeyMaterial, SchemeInstance, SchemeKind, Signature};
pub use keys::{dsa_grgen, rsa_gen, DsaKey, RsaKey};
