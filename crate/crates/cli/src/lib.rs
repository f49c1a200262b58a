//! Library surface of the experiment runner, so integration tests and other
//! tooling can drive experiments without going through the binary.

pub mod config;
pub mod experiments;

pub use config::{
    validate_config, ConfigBuilder, ConfigError, ExperimentConfig, ExperimentKind, SweepVariable,
};
pub use experiments::{run_experiment, RunError};
