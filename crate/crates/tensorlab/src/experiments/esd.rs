//! Spectra of the mode Gram matrices of one spiked observation per trial:
//! semicircle bulk, isolated spikes, and eigenvector alignments.

use rayon::prelude::*;
use tensorlab_core::linalg::{symmetric_eigen, vector_alignment};
use tensorlab_core::rng::derive_seed;
use tensorlab_core::theory::{
    count_outliers, ks_distance, scales, semicircle_cdf, spike_prediction, EsdSample, ScalePair, SpikePrediction,
};
use tensorlab_core::SpikedInstance;

use crate::config::ExperimentConfig;
use crate::error::RunError;
use crate::record::{sort_records, Record};

#[derive(Debug, Clone)]
pub struct Direction {
    pub q: usize,
    /// `s_q²(P^(k))`.
    pub s_sq: f64,
    pub prediction: SpikePrediction,
    /// `(λ_q − μ)/σ` for the `q`-th largest eigenvalue.
    pub position: f64,
    /// `‖X^(k)ᵀ û_q‖²`.
    pub alignment: f64,
}

#[derive(Debug, Clone)]
pub struct HistogramBin {
    pub lo: f64,
    pub hi: f64,
    pub density: f64,
    /// Semicircle mass of the bin divided by its width.
    pub semicircle: f64,
}

#[derive(Debug, Clone)]
pub struct EsdMode {
    pub mode: usize,
    pub scale: ScalePair,
    /// All centered-scaled eigenvalues, non-increasing.
    pub centered: Vec<f64>,
    pub ks_bulk: f64,
    pub outliers: usize,
    pub predicted_outliers: usize,
    pub directions: Vec<Direction>,
    pub histogram: Vec<HistogramBin>,
}

#[derive(Debug, Clone)]
pub struct EsdTrial {
    pub trial: usize,
    pub seed: u64,
    pub modes: Vec<EsdMode>,
}

#[derive(Debug, Clone)]
pub struct EsdReport {
    pub dims: Vec<usize>,
    pub ranks: Vec<usize>,
    pub n_param: u64,
    pub epsilon: f64,
    pub trials: Vec<EsdTrial>,
}

fn histogram(values: &[f64], bins: usize) -> Vec<HistogramBin> {
    let vmin = values.iter().copied().fold(f64::INFINITY, f64::min);
    let vmax = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = vmin.min(-2.5);
    let hi = vmax.max(2.5) + 1e-9;
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for &v in values {
        let b = (((v - lo) / width) as usize).min(bins - 1);
        counts[b] += 1;
    }
    let total = values.len() as f64;
    counts
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let (a, b) = (lo + i as f64 * width, lo + (i + 1) as f64 * width);
            HistogramBin {
                lo: a,
                hi: b,
                density: c as f64 / (total * width),
                semicircle: (semicircle_cdf(b) - semicircle_cdf(a)) / width,
            }
        })
        .collect()
}

pub fn run_trial(cfg: &ExperimentConfig, trial: usize) -> Result<EsdTrial, RunError> {
    let n_param = cfg.n_param();
    let seed = derive_seed(cfg.base_seed, trial as u64);
    let inst = SpikedInstance::generate(&cfg.dims, &cfg.ranks, n_param, cfg.omega, seed)?;
    let grams = (0..cfg.dims.len()).map(|m| inst.observed.mode_gram(m)).collect::<Result<Vec<_>, _>>()?;
    let signal = inst.signal;
    drop(inst.observed);

    let mut modes = Vec::with_capacity(grams.len());
    for (mode, gram) in grams.into_iter().enumerate() {
        let scale = scales(&cfg.dims, n_param, mode)?;
        let (eigenvalues, vectors) = symmetric_eigen(&gram)?;
        let esd = EsdSample::from_eigenvalues(&eigenvalues, &scale)?;
        let r = cfg.ranks[mode];
        let ks_bulk = ks_distance(&esd.bulk(cfg.epsilon_outlier, r))?;
        let outliers = count_outliers(&esd, cfg.epsilon_outlier);
        let sv_sq = signal.mode_sv_sq(mode)?;
        let x = signal.factor(mode);
        let directions = sv_sq
            .iter()
            .enumerate()
            .map(|(q, &s_sq)| {
                Ok(Direction {
                    q,
                    s_sq,
                    prediction: spike_prediction(s_sq, scale.sigma),
                    position: esd.values[q],
                    alignment: vector_alignment(x, &vectors.column(q))?,
                })
            })
            .collect::<Result<Vec<_>, RunError>>()?;
        let predicted_outliers = directions.iter().filter(|d| d.prediction.is_spike()).count();
        modes.push(EsdMode {
            mode,
            scale,
            histogram: histogram(&esd.values, cfg.bins),
            centered: esd.values,
            ks_bulk,
            outliers,
            predicted_outliers,
            directions,
        });
    }
    Ok(EsdTrial { trial, seed, modes })
}

pub fn run(cfg: &ExperimentConfig) -> Result<EsdReport, RunError> {
    let trials = (0..cfg.trials).into_par_iter().map(|t| run_trial(cfg, t)).collect::<Result<Vec<_>, _>>()?;
    Ok(EsdReport {
        dims: cfg.dims.clone(),
        ranks: cfg.ranks.clone(),
        n_param: cfg.n_param(),
        epsilon: cfg.epsilon_outlier,
        trials,
    })
}

impl EsdReport {
    /// `bins + 2 r_k` rows per mode and trial.
    pub fn records(&self) -> Vec<Record> {
        let mut out = Vec::new();
        for t in &self.trials {
            for m in &t.modes {
                let base = |kind: &str, index: usize| {
                    Record::new()
                        .with("trial", t.trial)
                        .with("seed", t.seed)
                        .with("mode", m.mode)
                        .with("kind", kind)
                        .with("index", index)
                };
                let tail = |r: Record| {
                    r.with("ks_bulk", m.ks_bulk)
                        .with("ks_limit", 0.0)
                        .with("outliers", m.outliers)
                        .with("predicted_outliers", m.predicted_outliers)
                        .with("mu", m.scale.mu)
                        .with("sigma", m.scale.sigma)
                };
                for (i, b) in m.histogram.iter().enumerate() {
                    out.push(tail(
                        base("histogram", i)
                            .with("x_lo", b.lo)
                            .with("x_hi", b.hi)
                            .with("rho", None::<f64>)
                            .with("empirical", b.density)
                            .with("theoretical", b.semicircle),
                    ));
                }
                for d in &m.directions {
                    out.push(tail(
                        base("spike", d.q)
                            .with("x_lo", None::<f64>)
                            .with("x_hi", None::<f64>)
                            .with("rho", d.prediction.rho)
                            .with("empirical", d.position)
                            .with("theoretical", d.prediction.xi),
                    ));
                    out.push(tail(
                        base("alignment", d.q)
                            .with("x_lo", None::<f64>)
                            .with("x_hi", None::<f64>)
                            .with("rho", d.prediction.rho)
                            .with("empirical", d.alignment)
                            .with("theoretical", d.prediction.zeta_plus),
                    ));
                }
            }
        }
        sort_records(&mut out, &["trial", "mode", "kind", "index"]);
        out
    }
}
