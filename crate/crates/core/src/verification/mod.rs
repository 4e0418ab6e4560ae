//! Statistical checks of the oracles, simulators and closed-form bounds.

mod abort;
mod chisq;
mod empirical;
mod fidelity;
mod load;
mod probe;

pub use abort::{abort_rate_experiment, random_script_aborts, AbortReport};
pub use chisq::{chi_square_uniform, ChiSquareOutcome, MIN_EXPECTED, SIGNIFICANCE};
pub use empirical::{chunk_seed, collect_empirical, collect_empirical_par, EmpiricalDistribution, CHUNK};
pub use fidelity::{
    canonicalize, fidelity_experiment, run_exact, run_ideal, run_simplified, FidelityReport, RawStep, Script,
    ScriptStep, BOTTOM,
};
pub use load::{max_load_experiment, LoadExperiment, LoadProfile};
pub use probe::{uniformity_probe, ProbeReport, ProbeScript};
