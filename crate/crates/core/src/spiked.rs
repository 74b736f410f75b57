//! Sampling the spiked tensor model `𝒯 = 𝒫 + 𝒩/√N` with a Tucker-structured signal
//! `𝒫 = [[𝓗; X¹, …, X^d]]`.
//!
//! Signals use an i.i.d. Gaussian core rescaled to a prescribed energy and
//! Haar-distributed factors (orthonormalized Gaussian matrices). Draw order
//! from a stream: core entries (row-major), then each factor in mode order.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{orthonormalize, symmetric_eigen, OrthonormalBasis};
use crate::matrix::Matrix;
use crate::rng::Rng;
use crate::tensor::{tucker_to_full, DenseTensor};
use crate::theory::sigma_n;

/// How the size parameter `N` is derived from the dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NConvention {
    /// `N = Σ n_k`.
    #[default]
    SumDims,
    /// `N = n_1`.
    FirstDim,
    Custom(u64),
}

impl NConvention {
    pub fn resolve(&self, dims: &[usize]) -> u64 {
        match *self {
            NConvention::SumDims => dims.iter().map(|&n| n as u64).sum(),
            NConvention::FirstDim => dims.first().copied().unwrap_or(0) as u64,
            NConvention::Custom(n) => n,
        }
    }
}

/// Core tensor plus one orthonormal factor per mode.
#[derive(Debug, Clone, PartialEq)]
pub struct TuckerFactors {
    core: DenseTensor,
    factors: Vec<OrthonormalBasis>,
}

impl TuckerFactors {
    pub fn new(core: DenseTensor, factors: Vec<OrthonormalBasis>) -> Result<Self> {
        if core.order() != factors.len() {
            return Err(Error::ShapeMismatch { expected: vec![core.order()], found: vec![factors.len()] });
        }
        let ranks: Vec<usize> = factors.iter().map(|f| f.rank()).collect();
        if core.shape() != ranks.as_slice() {
            return Err(Error::ShapeMismatch { expected: core.shape().to_vec(), found: ranks });
        }
        Ok(TuckerFactors { core, factors })
    }

    pub fn core(&self) -> &DenseTensor {
        &self.core
    }

    pub fn factors(&self) -> &[OrthonormalBasis] {
        &self.factors
    }

    pub fn factor(&self, mode: usize) -> &OrthonormalBasis {
        &self.factors[mode]
    }

    pub fn order(&self) -> usize {
        self.factors.len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.ambient_dim()).collect()
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.core.shape().to_vec()
    }

    /// Materializes `[[core; U¹, …, U^d]]`.
    pub fn full(&self) -> DenseTensor {
        let mats: Vec<Matrix> = self.factors.iter().map(|f| f.matrix().clone()).collect();
        tucker_to_full(&self.core, &mats).expect("validated at construction")
    }

    /// `‖full()‖_F`, equal to the core norm because the factors are isometries.
    pub fn frob_norm(&self) -> f64 {
        self.core.frob_norm()
    }

    /// Multiplies the core by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        TuckerFactors { core: self.core.scale(s), factors: self.factors.clone() }
    }

    /// Squared singular values `s_q²(P^(k))`, non-increasing, read off the core unfolding.
    pub fn mode_sv_sq(&self, mode: usize) -> Result<Vec<f64>> {
        let (vals, _) = symmetric_eigen(&self.core.mode_gram(mode)?)?;
        Ok(vals.into_iter().map(|v| v.max(0.0)).collect())
    }
}

/// A sampled observation together with its ground truth.
#[derive(Debug, Clone)]
pub struct SpikedInstance {
    pub signal: TuckerFactors,
    pub observed: DenseTensor,
    pub n_param: u64,
    /// `‖𝒫‖_F² / σ_N`.
    pub omega: f64,
    pub seed: u64,
}

impl SpikedInstance {
    /// Signal and noise both drawn from one stream seeded by `seed`.
    pub fn generate(dims: &[usize], ranks: &[usize], n_param: u64, omega: f64, seed: u64) -> Result<Self> {
        let mut rng = Rng::seed_from_u64(seed);
        let signal = make_signal(dims, ranks, n_param, omega, &mut rng)?;
        sample_observation(signal, n_param, &mut rng)
    }
}

/// Haar-distributed `n x r` orthonormal basis.
pub fn haar_basis(n: usize, r: usize, rng: &mut Rng) -> Result<OrthonormalBasis> {
    if r == 0 || r > n {
        return Err(Error::RankExceedsDimension { mode: 0, rank: r, dim: n });
    }
    loop {
        let mut data = vec![0.0; n * r];
        rng.fill_normal(&mut data);
        let g = Matrix::new(n, r, data)?;
        // Positive-diagonal QR makes the law of Q exactly Haar; rank deficiency has probability zero.
        if let Ok(q) = orthonormalize(&g) {
            return Ok(q);
        }
    }
}

fn check_ranks(dims: &[usize], ranks: &[usize]) -> Result<()> {
    if dims.is_empty() {
        return Err(Error::Empty("dimension list"));
    }
    if dims.len() != ranks.len() {
        return Err(Error::ShapeMismatch { expected: dims.to_vec(), found: ranks.to_vec() });
    }
    for (mode, (&n, &r)) in dims.iter().zip(ranks).enumerate() {
        if n == 0 || r == 0 {
            return Err(Error::InvalidShape(dims.to_vec()));
        }
        if r > n {
            return Err(Error::RankExceedsDimension { mode, rank: r, dim: n });
        }
    }
    Ok(())
}

/// Random signal with `‖𝒫‖_F² = ω σ_N` exactly.
pub fn make_signal(dims: &[usize], ranks: &[usize], n_param: u64, omega: f64, rng: &mut Rng) -> Result<TuckerFactors> {
    check_ranks(dims, ranks)?;
    if !(omega >= 0.0) || !omega.is_finite() {
        return Err(Error::InvalidArgument("omega must be finite and non-negative"));
    }
    if n_param == 0 {
        return Err(Error::InvalidArgument("N must be positive"));
    }
    let mut core = DenseTensor::zeros(ranks)?;
    rng.fill_normal(core.data_mut());
    let factors = dims.iter().zip(ranks).map(|(&n, &r)| haar_basis(n, r, rng)).collect::<Result<Vec<_>>>()?;
    let target = libm::sqrt(omega * sigma_n(dims, n_param));
    let norm = core.frob_norm();
    let core = if target == 0.0 || norm == 0.0 { DenseTensor::zeros(ranks)? } else { core.scale(target / norm) };
    TuckerFactors::new(core, factors)
}

/// `𝒯 = full(𝒫) + G/√N` with i.i.d. standard normal `G` drawn from `rng`.
pub fn sample_observation(signal: TuckerFactors, n_param: u64, rng: &mut Rng) -> Result<SpikedInstance> {
    if n_param == 0 {
        return Err(Error::InvalidArgument("N must be positive"));
    }
    let seed = rng.seed();
    let mut observed = signal.full();
    let inv_sqrt_n = 1.0 / libm::sqrt(n_param as f64);
    for x in observed.data_mut() {
        *x += inv_sqrt_n * rng.standard_normal();
    }
    let energy = signal.frob_norm() * signal.frob_norm();
    let omega = energy / sigma_n(&signal.dims(), n_param);
    Ok(SpikedInstance { signal, observed, n_param, omega, seed })
}

/// Pure-noise tensor `G` with i.i.d. standard normal entries (unscaled).
pub fn gaussian_tensor(dims: &[usize], rng: &mut Rng) -> Result<DenseTensor> {
    let mut t = DenseTensor::zeros(dims)?;
    rng.fill_normal(t.data_mut());
    Ok(t)
}
