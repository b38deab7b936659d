//! Experiment harness for the flux-form semi-Lagrangian schemes: named
//! benchmark presets, whole-table runs with CSV/text emission, plot-data
//! files and an invariant selftest.

pub mod config;
pub mod output;
pub mod runner;
pub mod selftest;
pub mod tables;

pub use config::{ExperimentConfig, ExperimentId, Scheme};
pub use runner::{run_experiment, simulate};
pub use tables::{run_table, table_spec};
