//! EUF-CMA games, experiment orchestration, bounds, result files and the CLI.

pub mod bounds;
mod cli;
mod config;
mod correctness;
mod game;
mod model;
mod results;
mod trials;
mod world;

pub use bounds::{BoundKind, BoundSizes, Direction};
pub use cli::cli_main;
pub use config::{Backend, ExperimentConfig, AUTO_TABLE_BITS};
pub use correctness::{correctness_check, scheme_params, CorrectnessReport, CorrectnessSizes};
pub use game::{Game, GameTranscript, Verdict};
pub use model::{ExtraQuery, Model, OracleKind};
pub use results::{emit_results, parse_results, render_results, ExperimentResult, Format, ResultParams};
pub use trials::{run_game, run_game_with, run_trials, run_trials_with, run_verdicts, stream, trial_seed, wilson, StreamId, Z95};
pub use world::{World, WorldOracle};
