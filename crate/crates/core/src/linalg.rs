//! Dominant singular subspaces via Gram-matrix eigendecomposition, QR-based
//! orthonormalization, and subspace comparison (principal angles, alignment).
//!
//! The symmetric eigensolver is Householder tridiagonalization followed by
//! implicit QL iterations (the EISPACK `tred2`/`tql2` pair). Eigenvectors are
//! kept as rows of a working matrix so every rotation touches contiguous memory.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Tolerance on `‖QᵀQ − I‖_max` accepted by [`OrthonormalBasis::new`].
pub const ORTHONORMAL_TOL: f64 = 1e-10;

/// An `n x r` matrix with orthonormal columns (a point of the Stiefel manifold).
#[derive(Debug, Clone, PartialEq)]
pub struct OrthonormalBasis(Matrix);

impl OrthonormalBasis {
    pub fn new(m: Matrix) -> Result<Self> {
        if m.cols() > m.rows() {
            return Err(Error::InvalidArgument("orthonormal basis needs cols <= rows"));
        }
        let defect = orthonormality_defect(&m);
        if !(defect <= ORTHONORMAL_TOL) {
            return Err(Error::InvalidArgument("columns are not orthonormal"));
        }
        Ok(OrthonormalBasis(m))
    }

    pub(crate) fn new_unchecked(m: Matrix) -> Self {
        debug_assert!(orthonormality_defect(&m) <= 1e-8);
        OrthonormalBasis(m)
    }

    /// Columns `e_0, …, e_{r-1}` of the identity in `ℝⁿ`.
    pub fn canonical(n: usize, r: usize) -> Result<Self> {
        if r == 0 || r > n {
            return Err(Error::RankExceedsDimension { mode: 0, rank: r, dim: n });
        }
        Ok(OrthonormalBasis(Matrix::from_fn(n, r, |i, j| if i == j { 1.0 } else { 0.0 })))
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn ambient_dim(&self) -> usize {
        self.0.rows()
    }

    pub fn rank(&self) -> usize {
        self.0.cols()
    }

    /// Right-multiplies by an orthogonal `r x r` matrix; the span is unchanged.
    pub fn rotate(&self, o: &Matrix) -> Result<Self> {
        Ok(OrthonormalBasis::new_unchecked(self.0.matmul(o)?))
    }

    /// Orthogonal projector `Q Qᵀ`.
    pub fn projector(&self) -> Matrix {
        self.0.gram()
    }
}

/// `max |QᵀQ − I|`.
pub fn orthonormality_defect(m: &Matrix) -> f64 {
    let g = m.t_matmul(m).expect("square product");
    let mut worst: f64 = 0.0;
    for i in 0..g.rows() {
        for j in 0..g.cols() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g[(i, j)] - target).abs());
        }
    }
    worst
}

/// Eigen- or squared-singular values in non-increasing order with matching vectors.
#[derive(Debug, Clone)]
pub struct SpectralResult {
    pub values: Vec<f64>,
    pub basis: OrthonormalBasis,
}

/// Full eigendecomposition of a symmetric matrix, values non-increasing.
/// The returned matrix holds the eigenvectors as columns.
pub fn symmetric_eigen(a: &Matrix) -> Result<(Vec<f64>, Matrix)> {
    let n = a.rows();
    if a.cols() != n {
        return Err(Error::ShapeMismatch { expected: vec![n, n], found: vec![a.rows(), a.cols()] });
    }
    if a.data().iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("symmetric eigen input"));
    }
    // w holds Vᵀ: row i of w is column i of the EISPACK working matrix V.
    let mut w = a.transpose().into_data();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tridiagonalize(n, &mut w, &mut d, &mut e);
    ql_implicit(n, &mut w, &mut d, &mut e)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[j].total_cmp(&d[i]));
    let values = order.iter().map(|&i| d[i]).collect();
    let vectors = Matrix::from_fn(n, n, |k, q| w[order[q] * n + k]);
    Ok((values, vectors))
}

fn tridiagonalize(n: usize, w: &mut [f64], d: &mut [f64], e: &mut [f64]) {
    // v(r, c) addresses V[r][c], stored transposed in w.
    macro_rules! v {
        ($r:expr, $c:expr) => {
            w[($c) * n + ($r)]
        };
    }
    for j in 0..n {
        d[j] = v!(n - 1, j);
    }
    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for k in 0..i {
            scale += d[k].abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v!(i - 1, j);
                v!(i, j) = 0.0;
                v!(j, i) = 0.0;
            }
        } else {
            for k in 0..i {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            let mut f = d[i - 1];
            let mut g = libm::sqrt(h);
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = 0.0;
            }
            for j in 0..i {
                f = d[j];
                v!(j, i) = f;
                g = e[j] + v!(j, j) * f;
                for k in j + 1..i {
                    g += v!(k, j) * d[k];
                    e[k] += v!(k, j) * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v!(k, j) -= f * e[k] + g * d[k];
                }
                d[j] = v!(i - 1, j);
                v!(i, j) = 0.0;
            }
        }
        d[i] = h;
    }
    // Accumulate transformations.
    for i in 0..n.saturating_sub(1) {
        v!(n - 1, i) = v!(i, i);
        v!(i, i) = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v!(k, i + 1) / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v!(k, i + 1) * v!(k, j);
                }
                for k in 0..=i {
                    v!(k, j) -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v!(k, i + 1) = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v!(n - 1, j);
        v!(n - 1, j) = 0.0;
    }
    v!(n - 1, n - 1) = 1.0;
    e[0] = 0.0;
}

fn ql_implicit(n: usize, w: &mut [f64], d: &mut [f64], e: &mut [f64]) -> Result<()> {
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    let eps = f64::EPSILON;
    let max_sweeps = 60 * n.max(1);
    let mut sweeps = 0usize;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            loop {
                sweeps += 1;
                if sweeps > max_sweeps {
                    return Err(Error::NonFinite("QL iteration failed to converge"));
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = libm::hypot(p, 1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().take(n).skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = libm::hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    let (lo, hi) = w.split_at_mut((i + 1) * n);
                    let vi = &mut lo[i * n..];
                    let vi1 = &mut hi[..n];
                    for (a, b) in vi.iter_mut().zip(vi1.iter_mut()) {
                        let t = *b;
                        *b = s * *a + c * t;
                        *a = c * *a - s * t;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if !(e[l].abs() > eps * tst1) {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    if d.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("eigenvalues"));
    }
    Ok(())
}

/// Top-`r` eigenpairs of a symmetric positive semidefinite Gram matrix.
pub fn dominant_gram_subspace(gram: &Matrix, r: usize) -> Result<SpectralResult> {
    let n = gram.rows();
    if r == 0 || r > n {
        return Err(Error::RankExceedsDimension { mode: 0, rank: r, dim: n });
    }
    let (values, vectors) = symmetric_eigen(gram)?;
    Ok(SpectralResult {
        values: values[..r].to_vec(),
        basis: OrthonormalBasis::new_unchecked(vectors.leading_columns(r)),
    })
}

/// Top-`r` left singular vectors of `m` and the squared singular values,
/// from the eigendecomposition of the smaller of the two Gram matrices
/// (never an SVD of the long matrix).
///
/// For a tall `m` the basis is `m V Λ^{-1/2}` from `mᵀm = V Λ Vᵀ`, re-orthonormalized;
/// when the `r`-th singular value is negligible against the first the `m mᵀ` route
/// is used instead, which still returns a complete orthonormal basis.
pub fn dominant_left_subspace(m: &Matrix, r: usize) -> Result<SpectralResult> {
    let limit = m.rows().min(m.cols());
    if r == 0 || r > limit {
        return Err(Error::RankExceedsDimension { mode: 0, rank: r, dim: limit });
    }
    if m.cols() < m.rows() {
        if let Some(res) = thin_left_subspace(m, r)? {
            return Ok(res);
        }
    }
    dominant_gram_subspace(&m.gram(), r)
}

fn thin_left_subspace(m: &Matrix, r: usize) -> Result<Option<SpectralResult>> {
    let (values, v) = symmetric_eigen(&m.t_matmul(m)?)?;
    if !(values[0] > 0.0) || values[r - 1] < 1e-12 * values[0] {
        return Ok(None);
    }
    let mut u = m.matmul(&v.leading_columns(r))?;
    for j in 0..r {
        let inv = 1.0 / libm::sqrt(values[j]);
        for i in 0..u.rows() {
            u[(i, j)] *= inv;
        }
    }
    Ok(orthonormalize(&u).ok().map(|basis| SpectralResult { values: values[..r].to_vec(), basis }))
}

/// All eigenvalues of `m mᵀ`, non-increasing, with eigenvectors.
pub fn full_gram_spectrum(m: &Matrix) -> Result<SpectralResult> {
    let (values, vectors) = symmetric_eigen(&m.gram())?;
    Ok(SpectralResult { values, basis: OrthonormalBasis::new_unchecked(vectors) })
}

/// Householder QR; returns `Q` (thin) and the diagonal of `R`.
fn householder_qr(m: &Matrix) -> (Matrix, Vec<f64>) {
    let (rows, cols) = m.shape();
    let mut a = m.clone();
    let mut reflectors: Vec<Vec<f64>> = Vec::with_capacity(cols);
    let mut rdiag = Vec::with_capacity(cols);
    for j in 0..cols {
        let norm = libm::sqrt((j..rows).map(|i| a[(i, j)] * a[(i, j)]).sum());
        let alpha = if a[(j, j)] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (j..rows).map(|i| a[(i, j)]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        if vnorm2 > 0.0 {
            for c in j..cols {
                let dot: f64 = v.iter().enumerate().map(|(k, vk)| vk * a[(j + k, c)]).sum();
                let f = 2.0 * dot / vnorm2;
                for (k, vk) in v.iter().enumerate() {
                    a[(j + k, c)] -= f * vk;
                }
            }
        }
        rdiag.push(a[(j, j)]);
        reflectors.push(v);
    }
    let mut q = Matrix::from_fn(rows, cols, |i, j| if i == j { 1.0 } else { 0.0 });
    for (j, v) in reflectors.iter().enumerate().rev() {
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        for c in 0..cols {
            let dot: f64 = v.iter().enumerate().map(|(k, vk)| vk * q[(j + k, c)]).sum();
            let f = 2.0 * dot / vnorm2;
            for (k, vk) in v.iter().enumerate() {
                q[(j + k, c)] -= f * vk;
            }
        }
    }
    (q, rdiag)
}

/// Orthonormal basis of the column span of `m`, with the sign convention that
/// the triangular factor has a positive diagonal.
pub fn orthonormalize(m: &Matrix) -> Result<OrthonormalBasis> {
    if m.cols() > m.rows() {
        return Err(Error::InvalidArgument("orthonormalize needs cols <= rows"));
    }
    if m.data().iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("orthonormalize input"));
    }
    let (mut q, rdiag) = householder_qr(m);
    let largest = rdiag.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    let smallest = rdiag.iter().fold(f64::INFINITY, |acc, x| acc.min(x.abs()));
    if largest == 0.0 || smallest < 1e-12 * largest {
        let ratio = if largest == 0.0 { 0.0 } else { smallest / largest };
        return Err(Error::RankDeficient { ratio });
    }
    for (j, rjj) in rdiag.iter().enumerate() {
        if *rjj < 0.0 {
            for i in 0..q.rows() {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    Ok(OrthonormalBasis::new_unchecked(q))
}

/// Thin SVD `a = U diag(s) Vᵀ` of a small matrix by one-sided Jacobi rotations.
/// Requires `rows >= cols`; `U` is `rows x cols`, `V` is `cols x cols`,
/// singular values non-increasing.
pub(crate) struct SmallSvd {
    pub u: Matrix,
    pub s: Vec<f64>,
    pub v: Matrix,
}

pub(crate) fn small_svd(a: &Matrix) -> SmallSvd {
    let (rows, cols) = a.shape();
    assert!(rows >= cols, "small_svd expects a tall or square matrix");
    let mut u = a.clone();
    let mut v = Matrix::identity(cols);
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = 0.0;
                for i in 0..rows {
                    alpha += u[(i, p)] * u[(i, p)];
                    beta += u[(i, q)] * u[(i, q)];
                    gamma += u[(i, p)] * u[(i, q)];
                }
                if gamma.abs() <= 1e-15 * libm::sqrt(alpha * beta) || gamma == 0.0 {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + libm::sqrt(1.0 + zeta * zeta));
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = c * t;
                for i in 0..rows {
                    let (x, y) = (u[(i, p)], u[(i, q)]);
                    u[(i, p)] = c * x - s * y;
                    u[(i, q)] = s * x + c * y;
                }
                for i in 0..cols {
                    let (x, y) = (v[(i, p)], v[(i, q)]);
                    v[(i, p)] = c * x - s * y;
                    v[(i, q)] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: Vec<f64> = (0..cols).map(|j| libm::sqrt((0..rows).map(|i| u[(i, j)] * u[(i, j)]).sum())).collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let s: Vec<f64> = order.iter().map(|&j| norms[j]).collect();
    let scale = s.first().copied().unwrap_or(0.0);
    let mut u_sorted = Matrix::zeros(rows, cols);
    let v_sorted = Matrix::from_fn(cols, cols, |i, k| v[(i, order[k])]);
    for (k, &j) in order.iter().enumerate() {
        if norms[j] > 1e-14 * scale && norms[j] > 0.0 {
            for i in 0..rows {
                u_sorted[(i, k)] = u[(i, j)] / norms[j];
            }
        } else {
            complete_column(&mut u_sorted, k);
        }
    }
    SmallSvd { u: u_sorted, s, v: v_sorted }
}

/// Fills column `k` with a unit vector orthogonal to columns `0..k`.
fn complete_column(u: &mut Matrix, k: usize) {
    let rows = u.rows();
    for e in 0..rows {
        let mut cand: Vec<f64> = (0..rows).map(|i| if i == e { 1.0 } else { 0.0 }).collect();
        for _ in 0..2 {
            for j in 0..k {
                let dot: f64 = (0..rows).map(|i| u[(i, j)] * cand[i]).sum();
                for (i, c) in cand.iter_mut().enumerate() {
                    *c -= dot * u[(i, j)];
                }
            }
        }
        let norm = libm::sqrt(cand.iter().map(|x| x * x).sum());
        if norm > 0.5 {
            for (i, c) in cand.iter().enumerate() {
                u[(i, k)] = c / norm;
            }
            return;
        }
    }
}

/// Singular values of a small matrix, non-increasing.
pub fn singular_values(a: &Matrix) -> Vec<f64> {
    if a.rows() >= a.cols() {
        small_svd(a).s
    } else {
        small_svd(&a.transpose()).s
    }
}

fn check_ambient(x: &OrthonormalBasis, u: &OrthonormalBasis) -> Result<()> {
    if x.ambient_dim() != u.ambient_dim() {
        return Err(Error::ShapeMismatch { expected: vec![x.ambient_dim()], found: vec![u.ambient_dim()] });
    }
    Ok(())
}

/// Principal angles `θ_q = arccos s_q(XᵀU)`, non-decreasing, `min(r_x, r_u)` of them.
pub fn principal_angles(x: &OrthonormalBasis, u: &OrthonormalBasis) -> Result<Vec<f64>> {
    check_ambient(x, u)?;
    let cross = x.matrix().t_matmul(u.matrix())?;
    Ok(singular_values(&cross).into_iter().map(|s| libm::acos(s.clamp(0.0, 1.0))).collect())
}

/// `(1/r) ‖XᵀU‖_F²`, the mean squared cosine of the principal angles.
pub fn mean_alignment(x: &OrthonormalBasis, u: &OrthonormalBasis) -> Result<f64> {
    check_ambient(x, u)?;
    if x.rank() != u.rank() {
        return Err(Error::ShapeMismatch { expected: vec![x.rank()], found: vec![u.rank()] });
    }
    let cross = x.matrix().t_matmul(u.matrix())?;
    let f = cross.frob_norm();
    Ok(f * f / x.rank() as f64)
}

/// `‖Xᵀu‖²` for a single unit vector `u`.
pub fn vector_alignment(x: &OrthonormalBasis, u: &[f64]) -> Result<f64> {
    if x.ambient_dim() != u.len() {
        return Err(Error::ShapeMismatch { expected: vec![x.ambient_dim()], found: vec![u.len()] });
    }
    let m = x.matrix();
    Ok((0..m.cols())
        .map(|q| {
            let c: f64 = (0..m.rows()).map(|i| m[(i, q)] * u[i]).sum();
            c * c
        })
        .sum())
}

/// Orthogonal `O` maximizing `tr(Oᵀ M)`, i.e. the Procrustes rotation `U Vᵀ` for `M = U Σ Vᵀ`.
pub fn procrustes_rotation(m: &Matrix) -> Result<Matrix> {
    if m.rows() != m.cols() {
        return Err(Error::ShapeMismatch { expected: vec![m.rows(), m.rows()], found: vec![m.rows(), m.cols()] });
    }
    let svd = small_svd(m);
    svd.u.matmul_t(&svd.v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tall_route_matches_gram_route() {
        let m = Matrix::from_fn(30, 6, |i, j| libm::sin((i * 7 + j * 3) as f64) * [9.0, 5.0, 3.0, 1.0, 0.5, 0.1][j]);
        let thin = dominant_left_subspace(&m, 3).unwrap();
        let wide = dominant_gram_subspace(&m.gram(), 3).unwrap();
        for (a, b) in thin.values.iter().zip(&wide.values) {
            assert!((a - b).abs() < 1e-10 * b);
        }
        assert!(thin.basis.projector().sub(&wide.basis.projector()).unwrap().max_abs() < 1e-10);
        // Rank-one tall input: the thin route declines and the full route completes the basis.
        let rank_one = Matrix::from_fn(8, 3, |i, _| (i + 1) as f64);
        let res = dominant_left_subspace(&rank_one, 2).unwrap();
        assert!(orthonormality_defect(res.basis.matrix()) < 1e-12);
    }

    #[test]
    fn diagonal_padded_matrix() {
        let m = Matrix::from_fn(3, 5, |i, j| if i == j { [3.0, 2.0, 1.0][i] } else { 0.0 });
        let res = dominant_left_subspace(&m, 2).unwrap();
        assert!((res.values[0] - 9.0).abs() < 1e-12);
        assert!((res.values[1] - 4.0).abs() < 1e-12);
        let b = res.basis.matrix();
        assert!((b[(0, 0)].abs() - 1.0).abs() < 1e-12);
        assert!((b[(1, 1)].abs() - 1.0).abs() < 1e-12);
        assert!(b[(2, 0)].abs() < 1e-12 && b[(2, 1)].abs() < 1e-12);
    }

    #[test]
    fn rank_too_large() {
        let m = Matrix::zeros(3, 2);
        assert!(dominant_left_subspace(&m, 3).is_err());
        assert!(dominant_left_subspace(&m, 0).is_err());
    }

    #[test]
    fn duplicate_rows_rank_deficient() {
        let m = Matrix::from_fn(3, 6, |i, j| if i < 2 { (j as f64).cos() } else { (j as f64 * 0.7).sin() });
        let res = dominant_left_subspace(&m, 3).unwrap();
        assert!(res.values[2].abs() < 1e-10);
        assert!(orthonormality_defect(res.basis.matrix()) < 1e-10);
    }

    #[test]
    fn gram_spectrum_basics() {
        let z = full_gram_spectrum(&Matrix::zeros(4, 3)).unwrap();
        assert!(z.values.iter().all(|&v| v == 0.0));
        let v = [1.0, -2.0, 0.5, 3.0];
        let row = Matrix::new(1, 4, v.to_vec()).unwrap();
        let s = full_gram_spectrum(&row).unwrap();
        assert!((s.values[0] - 14.25).abs() < 1e-12);
        let m = Matrix::from_fn(5, 7, |i, j| libm::sin((i * 7 + j) as f64 * 1.3));
        let s = full_gram_spectrum(&m).unwrap();
        let tr: f64 = s.values.iter().sum();
        let f = m.frob_norm();
        assert!((tr - f * f).abs() <= 1e-9 * f * f);
        assert!(s.values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn eigen_on_one_by_one_and_tridiagonal() {
        let (v, q) = symmetric_eigen(&Matrix::from_rows(&[&[-4.0]]).unwrap()).unwrap();
        assert_eq!(v, vec![-4.0]);
        assert_eq!(q[(0, 0)].abs(), 1.0);
        // Path-graph Laplacian-like matrix with known eigenvalues 2 - 2cos(kπ/(n+1)).
        let n = 6;
        let a = Matrix::from_fn(n, n, |i, j| {
            if i == j {
                2.0
            } else if i.abs_diff(j) == 1 {
                -1.0
            } else {
                0.0
            }
        });
        let (vals, _) = symmetric_eigen(&a).unwrap();
        for (k, val) in vals.iter().enumerate() {
            let idx = (n - k) as f64;
            let want = 2.0 - 2.0 * libm::cos(idx * core::f64::consts::PI / (n as f64 + 1.0));
            assert!((val - want).abs() < 1e-12, "{val} vs {want}");
        }
    }

    #[test]
    fn orthonormalize_examples() {
        let m = Matrix::from_rows(&[&[2.0, 0.0], &[0.0, 0.0], &[0.0, 3.0]]).unwrap();
        let q = orthonormalize(&m).unwrap();
        let want = Matrix::from_rows(&[&[1.0, 0.0], &[0.0, 0.0], &[0.0, 1.0]]).unwrap();
        assert!(q.matrix().sub(&want).unwrap().max_abs() < 1e-15);
        let again = orthonormalize(q.matrix()).unwrap();
        assert!(again.matrix().sub(q.matrix()).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn orthonormalize_rejects_rank_deficiency() {
        let m = Matrix::from_rows(&[&[1.0, 2.0], &[2.0, 4.0], &[3.0, 6.0]]).unwrap();
        assert!(matches!(orthonormalize(&m), Err(Error::RankDeficient { .. })));
        assert!(matches!(orthonormalize(&Matrix::zeros(3, 1)), Err(Error::RankDeficient { .. })));
    }

    #[test]
    fn angles_and_alignment_simple_cases() {
        let x = OrthonormalBasis::canonical(3, 2).unwrap();
        let angles = principal_angles(&x, &x).unwrap();
        assert!(angles.iter().all(|a| a.abs() < 1e-7));
        assert!((mean_alignment(&x, &x).unwrap() - 1.0).abs() < 1e-15);

        let e1 = OrthonormalBasis::canonical(2, 1).unwrap();
        let e2 = OrthonormalBasis::new(Matrix::from_rows(&[&[0.0], &[1.0]]).unwrap()).unwrap();
        let a = principal_angles(&e1, &e2).unwrap();
        assert!((a[0] - core::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert_eq!(mean_alignment(&e1, &e2).unwrap(), 0.0);

        // span{e1, e2} vs span{e1, e3}: one shared direction, one orthogonal pair.
        let u = OrthonormalBasis::new(Matrix::from_rows(&[&[1.0, 0.0], &[0.0, 0.0], &[0.0, 1.0]]).unwrap()).unwrap();
        assert!((mean_alignment(&x, &u).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn alignment_dimension_errors() {
        let a = OrthonormalBasis::canonical(3, 2).unwrap();
        let b = OrthonormalBasis::canonical(4, 2).unwrap();
        let c = OrthonormalBasis::canonical(3, 1).unwrap();
        assert!(principal_angles(&a, &b).is_err());
        assert!(mean_alignment(&a, &c).is_err());
        assert_eq!(principal_angles(&a, &c).unwrap().len(), 1);
    }

    #[test]
    fn procrustes_recovers_rotation() {
        let th: f64 = 0.7;
        let o = Matrix::from_rows(&[&[th.cos(), -th.sin()], &[th.sin(), th.cos()]]).unwrap();
        let r = procrustes_rotation(&o).unwrap();
        assert!(r.sub(&o).unwrap().max_abs() < 1e-12);
        let zero = procrustes_rotation(&Matrix::zeros(2, 2)).unwrap();
        assert!(orthonormality_defect(&zero) < 1e-12);
    }

    #[test]
    fn basis_validation() {
        assert!(OrthonormalBasis::new(Matrix::from_rows(&[&[1.0], &[1.0]]).unwrap()).is_err());
        assert!(OrthonormalBasis::new(Matrix::zeros(2, 3)).is_err());
    }
}
