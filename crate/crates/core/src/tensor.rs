//! Dense d-way tensors stored row-major (last index fastest).
//!
//! Modes are zero-based. The mode-`k` unfolding is the `n_k x ∏_{j≠k} n_j`
//! matrix whose columns are mode-`k` fibers; its column index enumerates the
//! remaining multi-index lexicographically with the smallest remaining mode
//! varying slowest. With this ordering the usual identities hold verbatim,
//! e.g. `unfold(x ⊗ y ⊗ z, 0) = x (y ⊠ z)ᵀ`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::gemm::{gemm, View};
use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq)]
pub struct DenseTensor {
    shape: Vec<usize>,
    data: Vec<f64>,
}

/// Splits a shape around `mode` into (product before, n_mode, product after).
fn split_shape(shape: &[usize], mode: usize) -> (usize, usize, usize) {
    let before = shape[..mode].iter().product();
    let after = shape[mode + 1..].iter().product();
    (before, shape[mode], after)
}

fn check_shape(shape: &[usize]) -> Result<usize> {
    if shape.is_empty() || shape.contains(&0) {
        return Err(Error::InvalidShape(shape.to_vec()));
    }
    Ok(shape.iter().product())
}

impl DenseTensor {
    pub fn new(shape: Vec<usize>, data: Vec<f64>) -> Result<Self> {
        let len = check_shape(&shape)?;
        if data.len() != len {
            return Err(Error::InvalidShape(shape));
        }
        Ok(DenseTensor { shape, data })
    }

    pub fn zeros(shape: &[usize]) -> Result<Self> {
        let len = check_shape(shape)?;
        Ok(DenseTensor { shape: shape.to_vec(), data: vec![0.0; len] })
    }

    /// Fills entries from a function of the multi-index.
    pub fn from_fn(shape: &[usize], mut f: impl FnMut(&[usize]) -> f64) -> Result<Self> {
        let len = check_shape(shape)?;
        let mut idx = vec![0usize; shape.len()];
        let mut data = Vec::with_capacity(len);
        for _ in 0..len {
            data.push(f(&idx));
            for k in (0..shape.len()).rev() {
                idx[k] += 1;
                if idx[k] < shape[k] {
                    break;
                }
                idx[k] = 0;
            }
        }
        Ok(DenseTensor { shape: shape.to_vec(), data })
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn order(&self) -> usize {
        self.shape.len()
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    fn offset(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.shape.len());
        idx.iter().zip(&self.shape).fold(0, |acc, (&i, &n)| {
            debug_assert!(i < n);
            acc * n + i
        })
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.data[self.offset(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: f64) {
        let off = self.offset(idx);
        self.data[off] = value;
    }

    fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.order() {
            return Err(Error::ModeOutOfRange { mode, order: self.order() });
        }
        Ok(())
    }

    /// Mode-`mode` unfolding.
    pub fn unfold(&self, mode: usize) -> Result<Matrix> {
        self.check_mode(mode)?;
        let (before, n, after) = split_shape(&self.shape, mode);
        let cols = before * after;
        let mut out = vec![0.0; n * cols];
        for a in 0..before {
            let slab = &self.data[a * n * after..(a + 1) * n * after];
            for i in 0..n {
                out[i * cols + a * after..i * cols + (a + 1) * after]
                    .copy_from_slice(&slab[i * after..(i + 1) * after]);
            }
        }
        Matrix::new(n, cols, out)
    }

    /// Inverse of [`DenseTensor::unfold`].
    pub fn fold(m: &Matrix, mode: usize, shape: &[usize]) -> Result<Self> {
        let len = check_shape(shape)?;
        if mode >= shape.len() {
            return Err(Error::ModeOutOfRange { mode, order: shape.len() });
        }
        let (before, n, after) = split_shape(shape, mode);
        if m.rows() != n || m.cols() != before * after {
            return Err(Error::ShapeMismatch { expected: vec![n, before * after], found: vec![m.rows(), m.cols()] });
        }
        let cols = m.cols();
        let src = m.data();
        let mut data = vec![0.0; len];
        for a in 0..before {
            for i in 0..n {
                data[(a * n + i) * after..(a * n + i + 1) * after]
                    .copy_from_slice(&src[i * cols + a * after..i * cols + (a + 1) * after]);
            }
        }
        Ok(DenseTensor { shape: shape.to_vec(), data })
    }

    /// Mode product with a linear map on mode `mode`.
    ///
    /// With `transpose == true`, `mat` is `n_mode x p` and the result entry is
    /// `Σ_i mat[i, j] · t[.., i, ..]` (contraction). Otherwise `mat` is `p x n_mode`
    /// and the result is `Σ_i mat[j, i] · t[.., i, ..]` (expansion).
    pub fn mode_product(&self, mode: usize, mat: &Matrix, transpose: bool) -> Result<Self> {
        self.check_mode(mode)?;
        let (before, n, after) = split_shape(&self.shape, mode);
        let (inner, p) = if transpose { mat.shape() } else { (mat.cols(), mat.rows()) };
        if inner != n {
            return Err(Error::ShapeMismatch { expected: vec![n], found: vec![inner] });
        }
        // Left operator L (p x n): L(j, i) = op(mat)[j, i].
        let left = if transpose { View::new(mat.data(), 1, p) } else { View::new(mat.data(), n, 1) };
        let mut shape = self.shape.clone();
        shape[mode] = p;
        let mut out = vec![0.0; before * p * after];
        if after == 1 {
            // out (before x p) = t (before x n) · Lᵀ
            let right = View::new(left.data, left.cs, left.rs);
            gemm(before, n, p, 1.0, View::new(&self.data, n, 1), right, 0.0, &mut out, p, 1);
        } else {
            for a in 0..before {
                let slab = &self.data[a * n * after..(a + 1) * n * after];
                let dst = &mut out[a * p * after..(a + 1) * p * after];
                gemm(p, n, after, 1.0, left, View::new(slab, after, 1), 0.0, dst, after, 1);
            }
        }
        Ok(DenseTensor { shape, data: out })
    }

    /// `unfold(mode) · unfold(mode)ᵀ`, computed without materializing the unfolding.
    pub fn mode_gram(&self, mode: usize) -> Result<Matrix> {
        self.check_mode(mode)?;
        let (before, n, after) = split_shape(&self.shape, mode);
        let mut g = Matrix::zeros(n, n);
        let out = g.data_mut();
        if after == 1 {
            let x = View::new(&self.data, n, 1);
            let xt = View::new(&self.data, 1, n);
            gemm(n, before, n, 1.0, xt, x, 0.0, out, n, 1);
        } else {
            for a in 0..before {
                let slab = &self.data[a * n * after..(a + 1) * n * after];
                let beta = if a == 0 { 0.0 } else { 1.0 };
                gemm(n, after, n, 1.0, View::new(slab, after, 1), View::new(slab, 1, after), beta, out, n, 1);
            }
        }
        g.symmetrize_from_upper();
        Ok(g)
    }

    pub fn frob_norm(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|x| x * x).sum())
    }

    /// `self + alpha * other`.
    pub fn add_scaled(&self, alpha: f64, other: &DenseTensor) -> Result<Self> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + alpha * b).collect();
        Ok(DenseTensor { shape: self.shape.clone(), data })
    }

    pub fn sub(&self, other: &DenseTensor) -> Result<Self> {
        self.add_scaled(-1.0, other)
    }

    pub fn scale(&self, s: f64) -> Self {
        DenseTensor { shape: self.shape.clone(), data: self.data.iter().map(|x| s * x).collect() }
    }

    fn check_same_shape(&self, other: &DenseTensor) -> Result<()> {
        if self.shape != other.shape {
            return Err(Error::ShapeMismatch { expected: self.shape.clone(), found: other.shape.clone() });
        }
        Ok(())
    }
}

/// Mode-`mode` unfolding; see the module docs for the column order.
pub fn unfold(t: &DenseTensor, mode: usize) -> Result<Matrix> {
    t.unfold(mode)
}

pub fn fold(m: &Matrix, mode: usize, shape: &[usize]) -> Result<DenseTensor> {
    DenseTensor::fold(m, mode, shape)
}

/// Rank-one tensor `x¹ ⊗ … ⊗ x^d`.
pub fn outer(vectors: &[&[f64]]) -> Result<DenseTensor> {
    if vectors.is_empty() {
        return Err(Error::Empty("outer product needs at least one vector"));
    }
    let shape: Vec<usize> = vectors.iter().map(|v| v.len()).collect();
    let len = check_shape(&shape)?;
    let mut data = vec![1.0];
    data.reserve(len);
    for v in vectors {
        data = data.iter().flat_map(|&a| v.iter().map(move |&b| a * b)).collect();
    }
    DenseTensor::new(shape, data)
}

fn check_factor_count(t: &DenseTensor, mats: &[Matrix]) -> Result<()> {
    if mats.len() != t.order() {
        return Err(Error::ShapeMismatch { expected: vec![t.order()], found: vec![mats.len()] });
    }
    Ok(())
}

/// Multilinear contraction `𝒯(A¹, …, A^d)` with `A^k: n_k x p_k`, computed as
/// sequential single-mode products.
pub fn contract(t: &DenseTensor, mats: &[Matrix]) -> Result<DenseTensor> {
    check_factor_count(t, mats)?;
    let mut acc = t.mode_product(0, &mats[0], true)?;
    for (mode, m) in mats.iter().enumerate().skip(1) {
        acc = acc.mode_product(mode, m, true)?;
    }
    Ok(acc)
}

/// Contraction on every mode except `skip`, which is left untouched.
pub fn contract_except(t: &DenseTensor, mats: &[&Matrix], skip: usize) -> Result<DenseTensor> {
    if mats.len() != t.order() {
        return Err(Error::ShapeMismatch { expected: vec![t.order()], found: vec![mats.len()] });
    }
    t.check_mode(skip)?;
    let mut acc: Option<DenseTensor> = None;
    for (mode, m) in mats.iter().enumerate() {
        if mode == skip {
            continue;
        }
        let src = acc.as_ref().unwrap_or(t);
        acc = Some(src.mode_product(mode, m, true)?);
    }
    Ok(acc.unwrap_or_else(|| t.clone()))
}

/// Multilinear product `[[𝒢; U¹, …, U^d]]` with `U^k: n_k x r_k`.
pub fn tucker_to_full(core: &DenseTensor, factors: &[Matrix]) -> Result<DenseTensor> {
    check_factor_count(core, factors)?;
    let mut acc = core.mode_product(0, &factors[0], false)?;
    for (mode, u) in factors.iter().enumerate().skip(1) {
        acc = acc.mode_product(mode, u, false)?;
    }
    Ok(acc)
}

pub fn frob_inner(a: &DenseTensor, b: &DenseTensor) -> Result<f64> {
    a.check_same_shape(b)?;
    Ok(a.data.iter().zip(&b.data).map(|(x, y)| x * y).sum())
}

pub fn frob_norm(a: &DenseTensor) -> f64 {
    a.frob_norm()
}

/// Bounds on the canonical-polyadic rank implied by a multilinear rank:
/// `(max_k r_k, min_k ∏_{j≠k} r_j)`.
pub fn cpd_rank_bounds(ranks: &[usize]) -> Result<(usize, usize)> {
    if ranks.is_empty() {
        return Err(Error::Empty("rank list"));
    }
    if ranks.contains(&0) {
        return Err(Error::InvalidArgument("ranks must be positive"));
    }
    let lower = *ranks.iter().max().unwrap();
    let upper = (0..ranks.len())
        .map(|k| ranks.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, r)| r).product::<usize>())
        .min()
        .unwrap();
    Ok((lower, upper))
}
