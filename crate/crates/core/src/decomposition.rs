//! Truncated MLSVD and higher-order orthogonal iteration (HOOI).

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{dominant_gram_subspace, dominant_left_subspace, procrustes_rotation, OrthonormalBasis};
use crate::matrix::Matrix;
use crate::spiked::TuckerFactors;
use crate::tensor::{contract, contract_except, tucker_to_full, DenseTensor};

/// Order of factor updates within one HOOI sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UpdateOrder {
    /// Mode `k` sees the factors already refreshed in this sweep (monotone ascent).
    #[default]
    GaussSeidel,
    /// Every mode is updated from the previous sweep's factors.
    Jacobi,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HooiOptions {
    /// Stop once the relative change of `‖𝒢_t‖_F` falls below this.
    pub tol: f64,
    pub max_iter: usize,
    pub update: UpdateOrder,
}

impl Default for HooiOptions {
    fn default() -> Self {
        HooiOptions { tol: 1e-8, max_iter: 100, update: UpdateOrder::GaussSeidel }
    }
}

#[derive(Debug, Clone)]
pub struct HooiReport {
    pub factors: TuckerFactors,
    pub iterations: usize,
    /// `‖𝒯(U_t¹, …, U_t^d)‖_F` for `t = 0..=iterations`.
    pub objective_trace: Vec<f64>,
    pub converged: bool,
}

fn check_ranks(t: &DenseTensor, ranks: &[usize]) -> Result<()> {
    if ranks.len() != t.order() {
        return Err(Error::ShapeMismatch { expected: t.shape().to_vec(), found: ranks.to_vec() });
    }
    for (mode, (&n, &r)) in t.shape().iter().zip(ranks).enumerate() {
        if r == 0 || r > n {
            return Err(Error::RankExceedsDimension { mode, rank: r, dim: n });
        }
    }
    Ok(())
}

fn with_core(t: &DenseTensor, factors: Vec<OrthonormalBasis>) -> Result<TuckerFactors> {
    let mats: Vec<Matrix> = factors.iter().map(|f| f.matrix().clone()).collect();
    let core = contract(t, &mats)?;
    TuckerFactors::new(core, factors)
}

/// Factor `k` spans the top-`r_k` left singular subspace of `T^(k)`; the core is
/// `𝒯(Û¹, …, Û^d)`.
pub fn truncated_mlsvd(t: &DenseTensor, ranks: &[usize]) -> Result<TuckerFactors> {
    check_ranks(t, ranks)?;
    let factors = ranks
        .iter()
        .enumerate()
        .map(|(mode, &r)| Ok(dominant_gram_subspace(&t.mode_gram(mode)?, r)?.basis))
        .collect::<Result<Vec<_>>>()?;
    with_core(t, factors)
}

/// Dominant `r`-dimensional left singular subspace of `T^(k) ⊠_{j≠k} U^j`, which
/// is the mode-`k` unfolding of `y`, the tensor contracted on every other mode.
fn top_subspace(y: &DenseTensor, mode: usize, rank: usize) -> Result<Matrix> {
    Ok(dominant_left_subspace(&y.unfold(mode)?, rank)?.basis.into_matrix())
}

/// Contracts `src` on `modes`, largest reduction `n/r` first.
fn contract_modes(src: &DenseTensor, us: &[Matrix], modes: core::ops::Range<usize>) -> Result<Option<DenseTensor>> {
    let mut order: Vec<usize> = modes.collect();
    order.sort_by(|&a, &b| {
        let ra = src.shape()[a] as f64 / us[a].cols() as f64;
        let rb = src.shape()[b] as f64 / us[b].cols() as f64;
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    let mut acc: Option<DenseTensor> = None;
    for mode in order {
        let next = acc.as_ref().unwrap_or(src).mode_product(mode, &us[mode], true)?;
        acc = Some(next);
    }
    Ok(acc)
}

/// One Gauss–Seidel sweep. `prefix` holds `𝒯` contracted on the modes already
/// refreshed in this sweep, so the tensor is traversed in full only once; the
/// returned tensor is the new core.
fn gauss_seidel_sweep(t: &DenseTensor, us: &mut [Matrix], ranks: &[usize]) -> Result<DenseTensor> {
    let d = ranks.len();
    let mut prefix: Option<DenseTensor> = None;
    for mode in 0..d {
        let src = prefix.as_ref().unwrap_or(t);
        let y = contract_modes(src, us, mode + 1..d)?;
        us[mode] = top_subspace(y.as_ref().unwrap_or(src), mode, ranks[mode])?;
        prefix = Some(src.mode_product(mode, &us[mode], true)?);
    }
    Ok(prefix.expect("order is at least one"))
}

fn jacobi_sweep(t: &DenseTensor, us: &mut [Matrix], ranks: &[usize]) -> Result<DenseTensor> {
    let previous = us.to_vec();
    let refs: Vec<&Matrix> = previous.iter().collect();
    for (mode, &rank) in ranks.iter().enumerate() {
        us[mode] = top_subspace(&contract_except(t, &refs, mode)?, mode, rank)?;
    }
    contract(t, us)
}

/// Higher-order orthogonal iteration, initialized by `init` or the truncated MLSVD.
pub fn hooi(t: &DenseTensor, ranks: &[usize], init: Option<&TuckerFactors>, opts: &HooiOptions) -> Result<HooiReport> {
    check_ranks(t, ranks)?;
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidArgument("tol must be positive"));
    }
    if opts.max_iter == 0 {
        return Err(Error::InvalidArgument("max_iter must be at least 1"));
    }
    let start = match init {
        Some(f) => {
            if f.dims() != t.shape() || f.ranks() != ranks {
                return Err(Error::ShapeMismatch { expected: t.shape().to_vec(), found: f.dims() });
            }
            f.factors().to_vec()
        }
        None => truncated_mlsvd(t, ranks)?.factors().to_vec(),
    };
    let mut us: Vec<Matrix> = start.into_iter().map(OrthonormalBasis::into_matrix).collect();
    let mut core = contract(t, &us)?;
    let mut objective = core.frob_norm();
    if !objective.is_finite() {
        return Err(Error::NonFinite("HOOI objective"));
    }
    let mut trace = vec![objective];
    let mut converged = false;
    let mut iterations = 0;
    while iterations < opts.max_iter {
        core = match opts.update {
            UpdateOrder::GaussSeidel => gauss_seidel_sweep(t, &mut us, ranks)?,
            UpdateOrder::Jacobi => jacobi_sweep(t, &mut us, ranks)?,
        };
        iterations += 1;
        let next = core.frob_norm();
        if !next.is_finite() {
            return Err(Error::NonFinite("HOOI objective"));
        }
        trace.push(next);
        let change = (next - objective).abs();
        objective = next;
        if change <= opts.tol * trace[trace.len() - 2] {
            converged = true;
            break;
        }
    }
    let factors = us.into_iter().map(OrthonormalBasis::new_unchecked).collect();
    Ok(HooiReport { factors: TuckerFactors::new(core, factors)?, iterations, objective_trace: trace, converged })
}

/// `[[𝒢; U¹, …, U^d]]`.
pub fn reconstruct(f: &TuckerFactors) -> DenseTensor {
    let mats: Vec<Matrix> = f.factors().iter().map(|u| u.matrix().clone()).collect();
    tucker_to_full(f.core(), &mats).expect("validated factors")
}

/// `‖𝒯 − reconstruct(f)‖_F`.
pub fn reconstruction_error(t: &DenseTensor, f: &TuckerFactors) -> Result<f64> {
    if f.dims() != t.shape() {
        return Err(Error::ShapeMismatch { expected: t.shape().to_vec(), found: f.dims() });
    }
    Ok(t.sub(&reconstruct(f))?.frob_norm())
}

/// Entrywise ratios of an estimated core to the true core after rotating each
/// estimated factor onto the truth by orthogonal Procrustes. Entries with
/// `|𝓗| <= floor` are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoreRatios {
    pub shape: Vec<usize>,
    pub ratios: Vec<Option<f64>>,
}

pub fn core_proportionality_check(f: &TuckerFactors, truth: &TuckerFactors, floor: f64) -> Result<CoreRatios> {
    if f.ranks() != truth.ranks() || f.dims() != truth.dims() {
        return Err(Error::ShapeMismatch { expected: truth.ranks(), found: f.ranks() });
    }
    let rotations: Vec<Matrix> = f
        .factors()
        .iter()
        .zip(truth.factors())
        .map(|(u, x)| procrustes_rotation(&u.matrix().t_matmul(x.matrix())?))
        .collect::<Result<_>>()?;
    // 𝒢 ×_k Û^k = (𝒢 ×_k O^kᵀ) ×_k (Û^k O^k), so the aligned core is 𝒢(O¹, …, O^d).
    let aligned = contract(f.core(), &rotations)?;
    let ratios = aligned
        .data()
        .iter()
        .zip(truth.core().data())
        .map(|(&g, &h)| if h.abs() > floor { Some(g / h) } else { None })
        .collect();
    Ok(CoreRatios { shape: truth.ranks(), ratios })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::mean_alignment;
    use crate::rng::Rng;
    use crate::spiked::make_signal;

    #[test]
    fn noiseless_exact_rank_recovery() {
        let sig = make_signal(&[8, 7, 6], &[2, 3, 2], 21, 5.0, &mut Rng::seed_from_u64(4)).unwrap();
        let t = sig.full();
        let f = truncated_mlsvd(&t, &[2, 3, 2]).unwrap();
        assert!(reconstruction_error(&t, &f).unwrap() < 1e-9);
        for mode in 0..3 {
            assert!((mean_alignment(f.factor(mode), sig.factor(mode)).unwrap() - 1.0).abs() < 1e-9);
        }
        let rep = hooi(&t, &[2, 3, 2], None, &HooiOptions::default()).unwrap();
        assert_eq!(rep.iterations, 1);
        assert!(rep.converged);
        assert!((rep.objective_trace[1] - t.frob_norm()).abs() < 1e-9 * t.frob_norm());
    }

    #[test]
    fn full_ranks_give_zero_error() {
        let mut rng = Rng::seed_from_u64(8);
        let t = crate::spiked::gaussian_tensor(&[3, 4, 2], &mut rng).unwrap();
        let rep = hooi(&t, &[3, 4, 2], None, &HooiOptions::default()).unwrap();
        assert_eq!(rep.iterations, 1);
        assert!(reconstruction_error(&t, &rep.factors).unwrap() < 1e-12);
    }

    #[test]
    fn rank_validation() {
        let t = DenseTensor::zeros(&[3, 3, 3]).unwrap();
        assert!(matches!(truncated_mlsvd(&t, &[4, 1, 1]), Err(Error::RankExceedsDimension { .. })));
        assert!(hooi(&t, &[1, 1], None, &HooiOptions::default()).is_err());
        let bad = HooiOptions { max_iter: 0, ..HooiOptions::default() };
        assert!(hooi(&t, &[1, 1, 1], None, &bad).is_err());
    }

    #[test]
    fn zero_tensor_is_not_an_error() {
        let t = DenseTensor::zeros(&[4, 3, 5]).unwrap();
        let rep = hooi(&t, &[2, 2, 2], None, &HooiOptions::default()).unwrap();
        assert_eq!(reconstruction_error(&t, &rep.factors).unwrap(), 0.0);
        assert!(rep.converged);
    }

    #[test]
    fn noiseless_core_ratios_are_one() {
        let sig = make_signal(&[9, 8, 7], &[2, 2, 3], 24, 4.0, &mut Rng::seed_from_u64(12)).unwrap();
        let f = truncated_mlsvd(&sig.full(), &[2, 2, 3]).unwrap();
        let ratios = core_proportionality_check(&f, &sig, 1e-6).unwrap();
        for r in ratios.ratios.iter().flatten() {
            assert!((r - 1.0).abs() < 1e-8, "{r}");
        }
    }

    #[test]
    fn orthogonal_estimate_has_vanishing_ratios() {
        let dims = [6, 6, 6];
        let sig = make_signal(&dims, &[2, 2, 2], 18, 4.0, &mut Rng::seed_from_u64(2)).unwrap();
        // Factors spanning the orthogonal complement of the truth.
        let t = sig.full();
        let complement: Vec<OrthonormalBasis> = sig
            .factors()
            .iter()
            .map(|x| {
                let p = Matrix::identity(6).sub(&x.projector()).unwrap();
                dominant_gram_subspace(&p, 2).unwrap().basis
            })
            .collect();
        let est = with_core(&t, complement).unwrap();
        let ratios = core_proportionality_check(&est, &sig, 1e-6).unwrap();
        for r in ratios.ratios.iter().flatten() {
            assert!(r.abs() < 1e-10);
        }
    }
}
