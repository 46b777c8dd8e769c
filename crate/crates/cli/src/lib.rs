//! Scenario runner for `semchan-core`.
//!
//! A scenario is a JSON config naming one computation (`kind`) plus its
//! inputs and optional expected values. [`run::run_scenario`] evaluates it,
//! checks the expectations and writes deterministic data files:
//! `<id>.result.json` and, for iterative or tabulated scenarios,
//! `<id>.trace.csv` (or `.json`).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod config;
pub mod error;
pub mod output;
pub mod run;

pub use config::ScenarioConfig;
pub use error::CliError;
pub use run::{run_many, run_scenario, RunOptions, RunReport};
