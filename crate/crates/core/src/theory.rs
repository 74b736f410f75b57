//! Closed-form large-dimensional predictions for the spiked tensor model.
//!
//! The centered-and-scaled Gram matrix `(T^(k) T^(k)ᵀ − μ_k I)/σ_N` has a
//! semicircle bulk on `[−2, 2]`; a signal direction with `ρ = s²/σ_N > 1`
//! produces an isolated eigenvalue at `ρ + 1/ρ` whose eigenvector has squared
//! alignment `1 − 1/ρ²` with the signal subspace.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::OrthonormalBasis;
use crate::matrix::Matrix;
use crate::spiked::TuckerFactors;
use crate::tensor::contract_except;

/// Centering `μ_N^(k)` and scale `σ_N` for one mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalePair {
    pub mu: f64,
    pub sigma: f64,
}

impl ScalePair {
    /// `(λ − μ)/σ`.
    pub fn center(&self, lambda: f64) -> f64 {
        (lambda - self.mu) / self.sigma
    }

    /// Inverse of [`ScalePair::center`].
    pub fn uncenter(&self, z: f64) -> f64 {
        self.mu + self.sigma * z
    }
}

/// `σ_N = √(∏ n_k) / N`.
pub fn sigma_n(dims: &[usize], n_param: u64) -> f64 {
    let prod: f64 = dims.iter().map(|&n| n as f64).product();
    libm::sqrt(prod) / n_param as f64
}

/// `μ_N^(k) = (1/N) ∏_{j≠k} n_j` and `σ_N`.
pub fn scales(dims: &[usize], n_param: u64, mode: usize) -> Result<ScalePair> {
    if mode >= dims.len() {
        return Err(Error::ModeOutOfRange { mode, order: dims.len() });
    }
    if n_param == 0 {
        return Err(Error::InvalidArgument("N must be positive"));
    }
    let others: f64 = dims.iter().enumerate().filter(|&(k, _)| k != mode).map(|(_, &n)| n as f64).product();
    Ok(ScalePair { mu: others / n_param as f64, sigma: sigma_n(dims, n_param) })
}

/// Semicircle density `(1/2π) √([4 − x²]⁺)`.
pub fn semicircle_pdf(x: f64) -> f64 {
    let v = 4.0 - x * x;
    if v <= 0.0 {
        0.0
    } else {
        libm::sqrt(v) / (2.0 * PI)
    }
}

/// Semicircle distribution function.
pub fn semicircle_cdf(x: f64) -> f64 {
    if x <= -2.0 {
        0.0
    } else if x >= 2.0 {
        1.0
    } else {
        0.5 + (x * libm::sqrt(4.0 - x * x) + 4.0 * libm::asin(x / 2.0)) / (4.0 * PI)
    }
}

/// Quantile function of the semicircle law, by bisection on the CDF.
pub fn semicircle_quantile(p: f64) -> f64 {
    let p = p.clamp(0.0, 1.0);
    let (mut lo, mut hi) = (-2.0, 2.0);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if semicircle_cdf(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Stieltjes transform of the semicircle law: the root of `m² + z m + 1 = 0`
/// with `Im(z) Im(m) > 0` off the real axis and `m ∈ (−1, 0)` for real `z > 2`.
pub fn stieltjes_sc(z: Complex64) -> Result<Complex64> {
    if z.im == 0.0 && z.re.abs() <= 2.0 {
        return Err(Error::OnSupport(z.re));
    }
    // √(z−2)·√(z+2) is analytic off [−2, 2] and behaves like z at infinity.
    let s = (z - 2.0).sqrt() * (z + 2.0).sqrt();
    // Product of the two roots is 1; dividing avoids cancellation for large |z|.
    Ok(-2.0 / (z + s))
}

/// Per-direction predictions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpikePrediction {
    pub rho: f64,
    /// Centered-scaled spike location `ρ + 1/ρ`, present iff `ρ > 1`.
    pub xi: Option<f64>,
    /// `[1 − 1/ρ²]⁺`.
    pub zeta_plus: f64,
}

impl SpikePrediction {
    /// Predicted raw eigenvalue `μ + σ ξ` of `T^(k) T^(k)ᵀ`.
    pub fn eigenvalue_location(&self, scale: &ScalePair) -> Option<f64> {
        self.xi.map(|xi| scale.uncenter(xi))
    }

    pub fn is_spike(&self) -> bool {
        self.xi.is_some()
    }
}

pub fn spike_prediction(s_sq: f64, sigma: f64) -> SpikePrediction {
    assert!(sigma > 0.0, "sigma must be positive");
    let rho = s_sq / sigma;
    if rho > 1.0 {
        SpikePrediction { rho, xi: Some(rho + 1.0 / rho), zeta_plus: 1.0 - 1.0 / (rho * rho) }
    } else {
        SpikePrediction { rho, xi: None, zeta_plus: 0.0 }
    }
}

/// `(1/r) Σ_q [1 − (σ/s_q²)²]⁺`.
pub fn predicted_mean_alignment(signal_sv_sq: &[f64], sigma: f64) -> f64 {
    assert!(!signal_sv_sq.is_empty(), "need at least one direction");
    signal_sv_sq.iter().map(|&s| spike_prediction(s, sigma).zeta_plus).sum::<f64>() / signal_sv_sq.len() as f64
}

/// Centered-and-scaled eigenvalues `(λ − μ)/σ`.
#[derive(Debug, Clone, PartialEq)]
pub struct EsdSample {
    pub values: Vec<f64>,
}

impl EsdSample {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("spectral sample"));
        }
        Ok(EsdSample { values })
    }

    pub fn from_eigenvalues(eigenvalues: &[f64], scale: &ScalePair) -> Result<Self> {
        EsdSample::new(eigenvalues.iter().map(|&l| scale.center(l)).collect())
    }

    /// The sample with its largest values removed, at most `max_removed` of them
    /// and only those above `2 + epsilon`.
    pub fn bulk(&self, epsilon: f64, max_removed: usize) -> EsdSample {
        let mut order: Vec<usize> = (0..self.values.len()).collect();
        order.sort_by(|&a, &b| self.values[b].total_cmp(&self.values[a]));
        let mut keep = vec![true; self.values.len()];
        for &i in order.iter().take(max_removed) {
            if self.values[i] > 2.0 + epsilon {
                keep[i] = false;
            }
        }
        let values = self.values.iter().zip(keep).filter_map(|(&v, k)| k.then_some(v)).collect();
        EsdSample { values }
    }
}

/// Kolmogorov–Smirnov distance between the sample and the semicircle law.
pub fn ks_distance(esd: &EsdSample) -> Result<f64> {
    if esd.values.is_empty() {
        return Err(Error::Empty("spectral sample"));
    }
    let mut v = esd.values.clone();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in v.iter().enumerate() {
        let f = semicircle_cdf(x);
        d = d.max((i + 1) as f64 / n - f).max(f - i as f64 / n);
    }
    Ok(d)
}

/// Number of sample values strictly above `2 + epsilon`.
pub fn count_outliers(esd: &EsdSample, epsilon: f64) -> usize {
    esd.values.iter().filter(|&&v| v > 2.0 + epsilon).count()
}

/// High-probability bound on `sup ‖𝒩(A¹, …, A^d)‖_F²` over Stiefel matrices
/// `A^k ∈ V_{r_k}(ℝ^{n_k})`, holding with probability `1 − δ`; `c_universal`
/// is the unquantified covering constant.
pub fn noise_contraction_bound(dims: &[usize], ranks: &[usize], delta: f64, c_universal: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::OutOfInterval { value: delta, lo: 0.0, hi: 1.0 });
    }
    if !(c_universal > 0.0) {
        return Err(Error::InvalidArgument("universal constant must be positive"));
    }
    if dims.is_empty() || dims.len() != ranks.len() {
        return Err(Error::ShapeMismatch { expected: dims.to_vec(), found: ranks.to_vec() });
    }
    let d = dims.len() as f64;
    let manifold_dim: f64 = dims.iter().zip(ranks).map(|(&n, &r)| r as f64 * (n as f64 - (r as f64 + 1.0) / 2.0)).sum();
    let prod_r: f64 = ranks.iter().map(|&r| r as f64).product();
    let exponent = 0.5 * prod_r - 1.0;
    let growth = libm::exp(exponent);
    let tail = if growth.is_finite() {
        libm::log((1.0 / delta) * f64::max(1.0, growth))
    } else {
        libm::log(1.0 / delta) + exponent
    };
    Ok(16.0 * (manifold_dim * libm::log(c_universal * d / libm::log(1.5)) + tail))
}

/// `L_N = min_{k, q} ‖𝒫(U¹, …, x^(k)_q, …, U^d)‖_F`: the weakest signal direction
/// after contracting the other modes on the initialization.
pub fn hooi_convergence_diagnostic(signal: &TuckerFactors, inits: &[OrthonormalBasis]) -> Result<f64> {
    let d = signal.order();
    if inits.len() != d {
        return Err(Error::ShapeMismatch { expected: vec![d], found: vec![inits.len()] });
    }
    for (mode, (x, u)) in signal.factors().iter().zip(inits).enumerate() {
        if x.ambient_dim() != u.ambient_dim() {
            return Err(Error::ShapeMismatch {
                expected: vec![mode, x.ambient_dim()],
                found: vec![mode, u.ambient_dim()],
            });
        }
    }
    // 𝒫(A¹, …, A^d) = 𝓗(X¹ᵀA¹, …, X^dᵀA^d), and X^kᵀ x^(k)_q = e_q.
    let overlaps: Vec<Matrix> =
        signal.factors().iter().zip(inits).map(|(x, u)| x.matrix().t_matmul(u.matrix())).collect::<Result<_>>()?;
    let mut best = f64::INFINITY;
    for mode in 0..d {
        let mats: Vec<&Matrix> = overlaps.iter().collect();
        let y = contract_except(signal.core(), &mats, mode)?;
        let g = y.mode_gram(mode)?;
        for q in 0..g.rows() {
            best = best.min(libm::sqrt(g[(q, q)].max(0.0)));
        }
    }
    Ok(best)
}
