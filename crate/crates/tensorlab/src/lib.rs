//! Monte-Carlo harness for low-multilinear-rank approximation under the
//! spiked tensor model: configuration, experiments, CSV output, and gates.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod config;
pub mod error;
pub mod experiments;
pub mod gates;
pub mod record;
pub mod stats;

pub use config::{Experiment, ExperimentConfig, Profile};
pub use error::{ConfigError, RunError};
pub use experiments::{run, run_with_threads, Report};
pub use record::{to_csv_string, write_csv, Record};

/// Environment variable overriding `base_seed`.
pub const SEED_ENV: &str = "TENSORLAB_SEED";

/// Seed precedence: explicit flag, then environment, then the config value.
pub fn resolve_seed(flag: Option<u64>, env: Option<&str>, config: u64) -> Result<u64, ConfigError> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match env {
        Some(v) => v.trim().parse().map_err(|_| ConfigError::Invalid(format!("{SEED_ENV}={v:?} is not a u64"))),
        None => Ok(config),
    }
}
