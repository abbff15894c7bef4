//! Config-driven experiments for the `pnodal` solver.

pub mod config;
pub mod run;

pub use config::{ConfigError, ExperimentConfig, PotentialSpec, Tolerances};
pub use run::{Experiment, Outcome, RunError};
