//! Subspace alignment against SNR for one fixed base signal `𝒫∘` with
//! `‖𝒫∘‖_F² = σ_N`, observed as `√ω 𝒫∘ + 𝒩/√N`.
//!
//! Each trial draws one noise tensor and reuses it across the whole `ω` grid
//! (common random numbers), so the curves are smooth in `ω` within a trial.

use rayon::prelude::*;
use tensorlab_core::rng::{derive_seed, Rng};
use tensorlab_core::spiked::gaussian_tensor;
use tensorlab_core::theory::{predicted_mean_alignment, sigma_n};
use tensorlab_core::{hooi, make_signal, mean_alignment, truncated_mlsvd, DenseTensor, TuckerFactors};

use crate::config::ExperimentConfig;
use crate::error::RunError;
use crate::record::{sort_records, Record};
use crate::stats::{mean, median, std_dev};

/// Stream index of the base signal, disjoint from the trial indices.
pub const SIGNAL_STREAM: u64 = u64::MAX;

#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub omega: f64,
    pub mode: usize,
    pub predicted: f64,
    /// One entry per trial.
    pub mlsvd: Vec<f64>,
    pub hooi: Vec<f64>,
    pub hooi_iterations: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    pub dims: Vec<usize>,
    pub ranks: Vec<usize>,
    pub n_param: u64,
    pub sigma: f64,
    pub signal_seed: u64,
    /// `s_q²(P∘^(k))` per mode, non-increasing.
    pub signal_sv_sq: Vec<Vec<f64>>,
    pub points: Vec<SweepPoint>,
}

impl SweepReport {
    /// `ω` values `σ_N / s_q²(P∘^(k))` at which mode `k` gains a direction, increasing.
    pub fn transitions(&self, mode: usize) -> Vec<f64> {
        self.signal_sv_sq[mode].iter().map(|&s| self.sigma / s).collect()
    }

    pub fn first_transition(&self, mode: usize) -> f64 {
        self.transitions(mode)[0]
    }

    pub fn records(&self) -> Vec<Record> {
        let mut out: Vec<Record> = self
            .points
            .iter()
            .map(|p| {
                let iters: Vec<f64> = p.hooi_iterations.iter().map(|&i| i as f64).collect();
                Record::new()
                    .with("mode", p.mode)
                    .with("omega", p.omega)
                    .with("trials", p.mlsvd.len())
                    .with("first_transition", self.first_transition(p.mode))
                    .with("mlsvd_alignment_mean", mean(&p.mlsvd))
                    .with("mlsvd_alignment_std", std_dev(&p.mlsvd))
                    .with("hooi_alignment_mean", mean(&p.hooi))
                    .with("hooi_alignment_std", std_dev(&p.hooi))
                    .with("predicted_alignment", p.predicted)
                    .with("hooi_iterations_median", median(&iters))
            })
            .collect();
        sort_records(&mut out, &["mode", "omega"]);
        out
    }
}

struct TrialResult {
    /// `(grid index, mode, mlsvd, hooi, iterations)`.
    values: Vec<(usize, usize, f64, f64, usize)>,
}

fn run_trial(
    cfg: &ExperimentConfig,
    signal: &TuckerFactors,
    clean: &DenseTensor,
    trial: usize,
) -> Result<TrialResult, RunError> {
    let n_param = cfg.n_param();
    let mut rng = Rng::seed_from_u64(derive_seed(cfg.base_seed, trial as u64));
    let noise = gaussian_tensor(&cfg.dims, &mut rng)?;
    let inv_sqrt_n = 1.0 / (n_param as f64).sqrt();
    let opts = cfg.hooi_options();
    let mut values = Vec::new();
    for (w, &omega) in cfg.omega_grid.iter().enumerate() {
        let s = omega.sqrt();
        let data = clean.data().iter().zip(noise.data()).map(|(p, g)| s * p + inv_sqrt_n * g).collect();
        let t = DenseTensor::new(cfg.dims.clone(), data)?;
        let init = truncated_mlsvd(&t, &cfg.ranks)?;
        let rep = hooi(&t, &cfg.ranks, Some(&init), &opts)?;
        for mode in 0..cfg.dims.len() {
            let a_ml = mean_alignment(init.factor(mode), signal.factor(mode))?;
            let a_ho = mean_alignment(rep.factors.factor(mode), signal.factor(mode))?;
            values.push((w, mode, a_ml, a_ho, rep.iterations));
        }
    }
    Ok(TrialResult { values })
}

pub fn run(cfg: &ExperimentConfig) -> Result<SweepReport, RunError> {
    let n_param = cfg.n_param();
    let sigma = sigma_n(&cfg.dims, n_param);
    let signal_seed = derive_seed(cfg.base_seed, SIGNAL_STREAM);
    let signal = make_signal(&cfg.dims, &cfg.ranks, n_param, 1.0, &mut Rng::seed_from_u64(signal_seed))?;
    let clean = signal.full();
    let signal_sv_sq = (0..cfg.dims.len()).map(|m| signal.mode_sv_sq(m)).collect::<Result<Vec<_>, _>>()?;

    let trials =
        (0..cfg.trials).into_par_iter().map(|t| run_trial(cfg, &signal, &clean, t)).collect::<Result<Vec<_>, _>>()?;

    let mut points = Vec::new();
    for (w, &omega) in cfg.omega_grid.iter().enumerate() {
        for mode in 0..cfg.dims.len() {
            let scaled: Vec<f64> = signal_sv_sq[mode].iter().map(|s| omega * s).collect();
            let mut p = SweepPoint {
                omega,
                mode,
                predicted: predicted_mean_alignment(&scaled, sigma),
                mlsvd: Vec::new(),
                hooi: Vec::new(),
                hooi_iterations: Vec::new(),
            };
            for tr in &trials {
                for &(wi, m, a, b, it) in &tr.values {
                    if wi == w && m == mode {
                        p.mlsvd.push(a);
                        p.hooi.push(b);
                        p.hooi_iterations.push(it);
                    }
                }
            }
            points.push(p);
        }
    }
    Ok(SweepReport {
        dims: cfg.dims.clone(),
        ranks: cfg.ranks.clone(),
        n_param,
        sigma,
        signal_seed,
        signal_sv_sq,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Experiment;

    #[test]
    fn small_sweep_shapes() {
        let cfg = ExperimentConfig {
            dims: vec![10, 12, 14],
            ranks: vec![2, 2, 3],
            trials: 2,
            omega_grid: vec![0.0, 5.0, 50.0],
            ..ExperimentConfig::defaults(Experiment::AlignmentSweep)
        };
        let rep = run(&cfg).unwrap();
        assert_eq!(rep.points.len(), 9);
        assert_eq!(rep.records().len(), 9);
        assert!(rep.points.iter().all(|p| p.mlsvd.len() == 2));
        let t = rep.transitions(2);
        assert_eq!(t.len(), 3);
        assert!(t.windows(2).all(|w| w[0] <= w[1]));
        // Zero SNR: predicted alignment is zero.
        assert_eq!(rep.points[0].predicted, 0.0);
    }
}
