use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::gemm::{gemm, View};

/// Dense row-major matrix of `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::InvalidShape(vec![rows, cols]));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Matrix { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds a matrix from row slices; all rows must share a length.
    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidArgument("ragged rows"));
        }
        Matrix::new(rows.len(), cols, rows.concat())
    }

    /// Column vector from a slice.
    pub fn column_vector(v: &[f64]) -> Result<Self> {
        Matrix::new(v.len(), 1, v.to_vec())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub(crate) fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.data[i * self.cols + j]).collect()
    }

    /// Keeps the first `k` columns.
    pub fn leading_columns(&self, k: usize) -> Matrix {
        assert!(k >= 1 && k <= self.cols);
        Matrix::from_fn(self.rows, k, |i, j| self[(i, j)])
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub(crate) fn view(&self) -> View<'_> {
        View::new(&self.data, self.cols, 1)
    }

    pub(crate) fn view_t(&self) -> View<'_> {
        View::new(&self.data, 1, self.cols)
    }

    /// `self * rhs`.
    pub fn matmul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::ShapeMismatch { expected: vec![self.cols, rhs.cols], found: vec![rhs.rows, rhs.cols] });
        }
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        gemm(self.rows, self.cols, rhs.cols, 1.0, self.view(), rhs.view(), 0.0, &mut out.data, rhs.cols, 1);
        Ok(out)
    }

    /// `selfᵀ * rhs`.
    pub fn t_matmul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.rows != rhs.rows {
            return Err(Error::ShapeMismatch { expected: vec![self.rows, rhs.cols], found: vec![rhs.rows, rhs.cols] });
        }
        let mut out = Matrix::zeros(self.cols, rhs.cols);
        gemm(self.cols, self.rows, rhs.cols, 1.0, self.view_t(), rhs.view(), 0.0, &mut out.data, rhs.cols, 1);
        Ok(out)
    }

    /// `self * rhsᵀ`.
    pub fn matmul_t(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.cols {
            return Err(Error::ShapeMismatch { expected: vec![rhs.rows, self.cols], found: vec![rhs.rows, rhs.cols] });
        }
        let mut out = Matrix::zeros(self.rows, rhs.rows);
        gemm(self.rows, self.cols, rhs.rows, 1.0, self.view(), rhs.view_t(), 0.0, &mut out.data, rhs.rows, 1);
        Ok(out)
    }

    /// Gram matrix `self * selfᵀ`, symmetrized exactly.
    pub fn gram(&self) -> Matrix {
        let mut out = Matrix::zeros(self.rows, self.rows);
        gemm(self.rows, self.cols, self.rows, 1.0, self.view(), self.view_t(), 0.0, &mut out.data, self.rows, 1);
        out.symmetrize_from_upper();
        out
    }

    pub(crate) fn symmetrize_from_upper(&mut self) {
        debug_assert_eq!(self.rows, self.cols);
        let n = self.rows;
        for i in 0..n {
            for j in 0..i {
                self.data[i * n + j] = self.data[j * n + i];
            }
        }
    }

    pub fn frob_norm(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|x| x * x).sum())
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| f64::max(m, x.abs()))
    }

    pub fn sub(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.shape() != rhs.shape() {
            return Err(Error::ShapeMismatch { expected: vec![self.rows, self.cols], found: vec![rhs.rows, rhs.cols] });
        }
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, s: f64) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| s * x).collect() }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Kronecker product: `[a ⊠ b]_{p1·i1 + j1, p2·i2 + j2} = a[i1, i2] · b[j1, j2]`
/// where `b` is `p1 x p2`.
pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (p1, p2) = b.shape();
    Matrix::from_fn(a.rows * p1, a.cols * p2, |r, c| a[(r / p1, c / p2)] * b[(r % p1, c % p2)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_of_identities_is_identity() {
        assert_eq!(kron(&Matrix::identity(2), &Matrix::identity(3)), Matrix::identity(6));
    }

    #[test]
    fn kron_small_example() {
        let a = Matrix::from_rows(&[&[1.0, 2.0], &[3.0, 4.0]]).unwrap();
        let b = Matrix::from_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let expected = Matrix::from_rows(&[
            &[0.0, 1.0, 0.0, 2.0],
            &[1.0, 0.0, 2.0, 0.0],
            &[0.0, 3.0, 0.0, 4.0],
            &[3.0, 0.0, 4.0, 0.0],
        ])
        .unwrap();
        assert_eq!(kron(&a, &b), expected);
    }

    #[test]
    fn products_agree_with_naive_loops() {
        let a = Matrix::from_fn(3, 4, |i, j| (i * 4 + j) as f64 - 5.0);
        let b = Matrix::from_fn(4, 2, |i, j| (i + 2 * j) as f64 * 0.5);
        let c = a.matmul(&b).unwrap();
        for i in 0..3 {
            for j in 0..2 {
                let want: f64 = (0..4).map(|k| a[(i, k)] * b[(k, j)]).sum();
                assert!((c[(i, j)] - want).abs() < 1e-12);
            }
        }
        assert_eq!(a.transpose().t_matmul(&b).unwrap(), c);
        assert_eq!(a.matmul_t(&b.transpose()).unwrap(), c);
        let g = a.gram();
        assert_eq!(g, a.matmul(&a.transpose()).unwrap());
    }

    #[test]
    fn constructor_rejects_bad_lengths() {
        assert!(Matrix::new(2, 2, vec![0.0; 3]).is_err());
        assert!(Matrix::new(0, 2, vec![]).is_err());
        assert!(Matrix::from_rows(&[&[1.0], &[1.0, 2.0]]).is_err());
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let a = Matrix::zeros(2, 3);
        assert!(matches!(a.matmul(&a), Err(Error::ShapeMismatch { .. })));
    }
}
