//! Experiment orchestration: configuration, the experiment runners and
//! their output files.

pub mod config;
pub mod output;
pub mod runs;

pub use config::{ExperimentKind, RunConfig, StatsMode};
pub use output::{RunManifest, Table};
pub use runs::run;
