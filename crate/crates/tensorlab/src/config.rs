//! Experiment configuration: a flat JSON document, with per-experiment
//! defaults taken from the reference settings.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use tensorlab_core::{HooiOptions, NConvention, UpdateOrder};

use crate::error::ConfigError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Experiment {
    Esd,
    AlignmentSweep,
    HooiScaling,
    Predict,
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::Esd => "esd",
            Experiment::AlignmentSweep => "alignment_sweep",
            Experiment::HooiScaling => "hooi_scaling",
            Experiment::Predict => "predict",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NConventionName {
    SumDims,
    FirstDim,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UpdateName {
    GaussSeidel,
    Jacobi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    /// Reduced dimensions for quick runs and CI.
    Small,
    /// The full reference dimensions.
    Paper,
}

impl std::str::FromStr for Profile {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s {
            "small" => Ok(Profile::Small),
            "paper" => Ok(Profile::Paper),
            other => Err(ConfigError::Invalid(format!("unknown profile `{other}` (expected small or paper)"))),
        }
    }
}

/// The document as written; every key is optional and unknown keys are rejected.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub experiment: Option<Experiment>,
    pub dims: Option<Vec<usize>>,
    pub ranks: Option<Vec<usize>>,
    pub n_convention: Option<NConventionName>,
    /// Only read when `n_convention` is `custom`.
    pub n: Option<u64>,
    pub omega: Option<f64>,
    pub omega_grid: Option<Vec<f64>>,
    pub n_grid: Option<Vec<u64>>,
    pub dim_ratios: Option<Vec<f64>>,
    pub trials: Option<usize>,
    pub base_seed: Option<u64>,
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
    pub update: Option<UpdateName>,
    pub epsilon_outlier: Option<f64>,
    pub c_universal: Option<f64>,
    pub delta: Option<f64>,
    pub bins: Option<usize>,
    pub s2: Option<Vec<f64>>,
    pub output_path: Option<PathBuf>,
}

/// Fully resolved and validated settings.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub dims: Vec<usize>,
    pub ranks: Vec<usize>,
    pub n_convention: NConvention,
    pub omega: f64,
    pub omega_grid: Vec<f64>,
    pub n_grid: Vec<u64>,
    pub dim_ratios: Vec<f64>,
    pub trials: usize,
    pub base_seed: u64,
    pub tol: f64,
    pub max_iter: usize,
    pub update: UpdateOrder,
    pub epsilon_outlier: f64,
    pub c_universal: f64,
    pub delta: f64,
    pub bins: usize,
    pub s2: Vec<f64>,
    pub output_path: Option<PathBuf>,
}

pub const DEFAULT_SEED: u64 = 20240601;

pub fn default_omega_grid() -> Vec<f64> {
    vec![0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0, 12.0, 16.0, 24.0, 32.0, 48.0, 64.0]
}

fn reference_dims(experiment: Experiment) -> Vec<usize> {
    match experiment {
        Experiment::Esd | Experiment::Predict => vec![300, 500, 700],
        Experiment::AlignmentSweep => vec![100, 200, 300],
        Experiment::HooiScaling => vec![20, 40, 60],
    }
}

fn small_dims(experiment: Experiment) -> Vec<usize> {
    match experiment {
        Experiment::Esd | Experiment::Predict => vec![60, 100, 140],
        Experiment::AlignmentSweep => vec![40, 80, 120],
        Experiment::HooiScaling => vec![20, 40, 60],
    }
}

impl ExperimentConfig {
    /// Defaults for `experiment`, matching the reference setting of each experiment.
    pub fn defaults(experiment: Experiment) -> Self {
        ExperimentConfig {
            experiment,
            dims: reference_dims(experiment),
            ranks: vec![3, 4, 5],
            n_convention: NConvention::SumDims,
            omega: match experiment {
                Experiment::HooiScaling => 10.0,
                _ => 15.0,
            },
            omega_grid: default_omega_grid(),
            n_grid: vec![120, 240, 480, 960],
            dim_ratios: vec![1.0 / 6.0, 2.0 / 6.0, 3.0 / 6.0],
            trials: 10,
            base_seed: DEFAULT_SEED,
            tol: 1e-8,
            max_iter: 100,
            update: UpdateOrder::GaussSeidel,
            epsilon_outlier: 0.3,
            c_universal: 1.0,
            delta: 0.01,
            bins: 60,
            s2: Vec::new(),
            output_path: None,
        }
    }

    pub fn from_raw(raw: RawConfig) -> Result<Self, ConfigError> {
        let experiment = raw.experiment.ok_or_else(|| ConfigError::Invalid("missing key `experiment`".into()))?;
        let mut c = ExperimentConfig::defaults(experiment);
        if let Some(v) = raw.dims {
            c.dims = v;
        }
        if let Some(v) = raw.ranks {
            c.ranks = v;
        }
        c.n_convention = match (raw.n_convention, raw.n) {
            (None | Some(NConventionName::SumDims), None) => NConvention::SumDims,
            (Some(NConventionName::FirstDim), None) => NConvention::FirstDim,
            (Some(NConventionName::Custom), Some(n)) => NConvention::Custom(n),
            (Some(NConventionName::Custom), None) => {
                return Err(ConfigError::Invalid("n_convention `custom` requires key `n`".into()))
            }
            (_, Some(_)) => return Err(ConfigError::Invalid("key `n` requires n_convention `custom`".into())),
        };
        macro_rules! take {
            ($($field:ident),*) => { $( if let Some(v) = raw.$field { c.$field = v; } )* };
        }
        take!(
            omega,
            omega_grid,
            n_grid,
            dim_ratios,
            trials,
            base_seed,
            tol,
            max_iter,
            epsilon_outlier,
            c_universal,
            delta,
            bins,
            s2
        );
        if let Some(u) = raw.update {
            c.update = match u {
                UpdateName::GaussSeidel => UpdateOrder::GaussSeidel,
                UpdateName::Jacobi => UpdateOrder::Jacobi,
            };
        }
        c.output_path = raw.output_path;
        c.validate()?;
        Ok(c)
    }

    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let raw: RawConfig = serde_json::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        ExperimentConfig::from_raw(raw)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io(path.to_path_buf(), e.to_string()))?;
        ExperimentConfig::from_json(&text)
    }

    /// Replaces the size fields with the profile's values.
    pub fn with_profile(mut self, profile: Profile) -> Result<Self, ConfigError> {
        match profile {
            Profile::Paper => {
                self.dims = reference_dims(self.experiment);
                self.n_grid = vec![120, 240, 480, 960];
            }
            Profile::Small => {
                self.dims = small_dims(self.experiment);
                self.n_grid = vec![60, 120, 240];
            }
        }
        self.validate()?;
        Ok(self)
    }

    pub fn hooi_options(&self) -> HooiOptions {
        HooiOptions { tol: self.tol, max_iter: self.max_iter, update: self.update }
    }

    /// `N` for the configured dimensions.
    pub fn n_param(&self) -> u64 {
        self.n_convention.resolve(&self.dims)
    }

    /// Dimensions for size parameter `n` under the configured ratios.
    pub fn scaled_dims(&self, n: u64) -> Vec<usize> {
        self.dim_ratios.iter().map(|r| (r * n as f64).round() as usize).collect()
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |msg: String| Err(ConfigError::Invalid(msg));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.ranks.is_empty() || self.ranks.contains(&0) {
            return bad("ranks must be non-empty and positive".into());
        }
        let check_shape = |dims: &[usize]| -> Result<(), ConfigError> {
            if dims.len() != self.ranks.len() {
                return Err(ConfigError::Invalid(format!(
                    "dims {dims:?} and ranks {:?} have different lengths",
                    self.ranks
                )));
            }
            for (k, (&n, &r)) in dims.iter().zip(&self.ranks).enumerate() {
                if r > n {
                    return Err(ConfigError::Invalid(format!("rank {r} exceeds dimension {n} in mode {k}")));
                }
            }
            Ok(())
        };
        if self.experiment == Experiment::HooiScaling {
            if self.n_grid.is_empty() || self.n_grid.contains(&0) {
                return bad("n_grid must be non-empty and positive".into());
            }
            if self.dim_ratios.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
                return bad("dim_ratios must be positive".into());
            }
            for &n in &self.n_grid {
                check_shape(&self.scaled_dims(n))?;
            }
        } else {
            check_shape(&self.dims)?;
            if self.n_param() == 0 {
                return bad("N must be positive".into());
            }
        }
        if self.experiment == Experiment::AlignmentSweep
            && (self.omega_grid.is_empty() || self.omega_grid.iter().any(|w| !(w.is_finite() && *w >= 0.0)))
        {
            return bad("omega_grid must be non-empty with finite non-negative values".into());
        }
        if !(self.omega.is_finite() && self.omega >= 0.0) {
            return bad("omega must be finite and non-negative".into());
        }
        if !(self.tol > 0.0) || self.max_iter == 0 {
            return bad("tol must be positive and max_iter at least 1".into());
        }
        if !(self.epsilon_outlier > 0.0) {
            return bad("epsilon_outlier must be positive".into());
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return bad("delta must lie in (0, 1)".into());
        }
        if !(self.c_universal > 0.0) {
            return bad("c_universal must be positive".into());
        }
        if self.bins == 0 {
            return bad("bins must be at least 1".into());
        }
        if self.s2.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return bad("s2 values must be finite and non-negative".into());
        }
        Ok(())
    }
}
