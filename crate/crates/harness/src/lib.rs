//! Experiment runner for the `deflsq-core` solvers: flat TOML configs, a
//! problem/method registry, run reports, method comparisons and β-field
//! exports. The `deflsq` binary wraps these behind a small CLI.

pub mod beta;
pub mod compare;
pub mod config;
pub mod error;
pub mod output;
pub mod registry;
pub mod report;
pub mod run;

pub use beta::{emit_beta_field, BetaFieldOutput, RegionCounts};
pub use compare::{compare_methods, Comparison};
pub use config::{output_root, ExperimentConfig, InitialGuess, OUTPUT_ROOT_ENV};
pub use error::HarnessError;
pub use registry::{MethodKind, ProblemInstance, ProblemKind};
pub use report::{Coordinates, RunReport, RUN_SCHEMA};
pub use run::{execute, run_experiment, Execution};
