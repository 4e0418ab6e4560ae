//! Lazy-sampling simulators and the probability primitives they rely on.

mod binomial;
mod distribution;
mod lazy;

pub use binomial::{bernoulli_ratio, sample_binomial, BinomialSpec};
pub use distribution::{statistical_distance, Distribution};
pub use lazy::{cp_co_bar, cp_co_sim, prefix_ro, prefix_ro_bar, LazyHashState, LazyOracle, Step, Telemetry};
