//! Alignment at initialization and after the first HOOI sweep as the tensor
//! grows with fixed dimension ratios and fixed SNR.

use rayon::prelude::*;
use tensorlab_core::rng::derive_seed;
use tensorlab_core::theory::{hooi_convergence_diagnostic, predicted_mean_alignment, sigma_n};
use tensorlab_core::{hooi, mean_alignment, truncated_mlsvd, HooiOptions, SpikedInstance};

use crate::config::ExperimentConfig;
use crate::error::RunError;
use crate::record::{sort_records, Record};

#[derive(Debug, Clone)]
pub struct ScalingMode {
    pub mode: usize,
    pub predicted_t0: f64,
    pub alignment_t0: f64,
    pub alignment_t1: f64,
    /// `(1 − alignment_t1)·√σ_N`.
    pub rescaled_gap: f64,
}

#[derive(Debug, Clone)]
pub struct ScalingRun {
    pub n_param: u64,
    pub dims: Vec<usize>,
    pub trial: usize,
    pub seed: u64,
    pub sigma: f64,
    pub modes: Vec<ScalingMode>,
    /// `L_N` at the MLSVD initialization.
    pub diagnostic: f64,
    pub signal_norm: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone)]
pub struct ScalingReport {
    pub runs: Vec<ScalingRun>,
}

pub fn trial_seed(base: u64, n_param: u64, trial: usize) -> u64 {
    derive_seed(derive_seed(base, n_param), trial as u64)
}

fn run_one(cfg: &ExperimentConfig, n_param: u64, trial: usize) -> Result<ScalingRun, RunError> {
    let dims = cfg.scaled_dims(n_param);
    let seed = trial_seed(cfg.base_seed, n_param, trial);
    let inst = SpikedInstance::generate(&dims, &cfg.ranks, n_param, cfg.omega, seed)?;
    let sigma = sigma_n(&dims, n_param);
    let init = truncated_mlsvd(&inst.observed, &cfg.ranks)?;
    let first = hooi(&inst.observed, &cfg.ranks, Some(&init), &HooiOptions { max_iter: 1, ..cfg.hooi_options() })?;
    let full = hooi(&inst.observed, &cfg.ranks, Some(&init), &cfg.hooi_options())?;
    let modes = (0..dims.len())
        .map(|mode| {
            let x = inst.signal.factor(mode);
            let a1 = mean_alignment(first.factors.factor(mode), x)?;
            Ok(ScalingMode {
                mode,
                predicted_t0: predicted_mean_alignment(&inst.signal.mode_sv_sq(mode)?, sigma),
                alignment_t0: mean_alignment(init.factor(mode), x)?,
                alignment_t1: a1,
                rescaled_gap: (1.0 - a1) * sigma.sqrt(),
            })
        })
        .collect::<Result<Vec<_>, RunError>>()?;
    Ok(ScalingRun {
        n_param,
        trial,
        seed,
        sigma,
        modes,
        diagnostic: hooi_convergence_diagnostic(&inst.signal, init.factors())?,
        signal_norm: inst.signal.frob_norm(),
        iterations: full.iterations,
        converged: full.converged,
        dims,
    })
}

pub fn run(cfg: &ExperimentConfig) -> Result<ScalingReport, RunError> {
    let jobs: Vec<(u64, usize)> = cfg.n_grid.iter().flat_map(|&n| (0..cfg.trials).map(move |t| (n, t))).collect();
    let runs = jobs.into_par_iter().map(|(n, t)| run_one(cfg, n, t)).collect::<Result<Vec<_>, _>>()?;
    Ok(ScalingReport { runs })
}

impl ScalingReport {
    pub fn n_values(&self) -> Vec<u64> {
        let mut ns: Vec<u64> = self.runs.iter().map(|r| r.n_param).collect();
        ns.sort_unstable();
        ns.dedup();
        ns
    }

    pub fn runs_at(&self, n_param: u64) -> impl Iterator<Item = &ScalingRun> {
        self.runs.iter().filter(move |r| r.n_param == n_param)
    }

    pub fn records(&self) -> Vec<Record> {
        let mut out = Vec::new();
        for r in &self.runs {
            for m in &r.modes {
                out.push(
                    Record::new()
                        .with("n", r.n_param as usize)
                        .with("trial", r.trial)
                        .with("seed", r.seed)
                        .with("mode", m.mode)
                        .with("dim", r.dims[m.mode])
                        .with("sigma", r.sigma)
                        .with("alignment_t0", m.alignment_t0)
                        .with("predicted_t0", m.predicted_t0)
                        .with("alignment_t1", m.alignment_t1)
                        .with("predicted_t1", None::<f64>)
                        .with("rescaled_gap", m.rescaled_gap)
                        .with("predicted_gap", None::<f64>)
                        .with("diagnostic", r.diagnostic)
                        .with("signal_norm", r.signal_norm)
                        .with("iterations", r.iterations)
                        .with("converged", r.converged),
                );
            }
        }
        sort_records(&mut out, &["n", "trial", "mode"]);
        out
    }
}
