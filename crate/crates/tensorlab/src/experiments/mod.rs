pub mod esd;
pub mod predict;
pub mod scaling;
pub mod sweep;

use crate::config::{Experiment, ExperimentConfig};
use crate::error::RunError;
use crate::gates::{self, GateResult};
use crate::record::Record;

pub use esd::EsdReport;
pub use scaling::ScalingReport;
pub use sweep::SweepReport;

#[derive(Debug, Clone)]
pub enum Report {
    Esd(EsdReport),
    Sweep(SweepReport),
    Scaling(ScalingReport),
    Predict(Vec<Record>),
}

impl Report {
    pub fn records(&self) -> Vec<Record> {
        match self {
            Report::Esd(r) => r.records(),
            Report::Sweep(r) => r.records(),
            Report::Scaling(r) => r.records(),
            Report::Predict(r) => r.clone(),
        }
    }

    /// Theory-versus-simulation checks at the default tolerances.
    pub fn gates(&self) -> Vec<GateResult> {
        match self {
            Report::Esd(r) => gates::esd_gates(r),
            Report::Sweep(r) => vec![gates::sweep_gate(r, &gates::SweepTolerances::default())],
            Report::Scaling(r) => gates::scaling_gates(r, 0.2),
            Report::Predict(_) => Vec::new(),
        }
    }
}

pub fn run(cfg: &ExperimentConfig) -> Result<Report, RunError> {
    cfg.validate()?;
    Ok(match cfg.experiment {
        Experiment::Esd => Report::Esd(esd::run(cfg)?),
        Experiment::AlignmentSweep => Report::Sweep(sweep::run(cfg)?),
        Experiment::HooiScaling => Report::Scaling(scaling::run(cfg)?),
        Experiment::Predict => Report::Predict(predict::run(cfg)?),
    })
}

/// Runs on a dedicated pool of `threads` workers (rayon's default when `None`).
pub fn run_with_threads(cfg: &ExperimentConfig, threads: Option<usize>) -> Result<Report, RunError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(k) = threads {
        builder = builder.num_threads(k);
    }
    let pool = builder.build().map_err(|e| RunError::Pool(e.to_string()))?;
    pool.install(|| run(cfg))
}
