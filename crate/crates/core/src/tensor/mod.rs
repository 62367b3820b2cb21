//! Dense third-order tensors and the t-product algebra.
//!
//! Storage is frontal-slice-major: the value at `(i, j, k)` lives at
//! `k * n1 * n2 + i * n2 + j`, so every frontal slice is a contiguous
//! row-major `n1 x n2` block.

mod io;
mod product;
mod transform;

pub use io::{read_t3b, read_t3b_from, write_t3b, write_t3b_to, T3B_MAGIC};
pub use product::{
    bcirc_oracle, identity_tensor, inner_product, is_f_symmetric, t_product, t_transpose, trace,
    BCIRC_ORACLE_MAX_ROWS,
};
pub use transform::{
    computed_slices, from_transform, from_transform_with_tol, is_real_slice, mirror_of,
    to_transform, TransformTensor, Tube, DEFAULT_SYMMETRY_TOL,
};

use nalgebra::DMatrix;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Tensor3 {
    n1: usize,
    n2: usize,
    n3: usize,
    data: Vec<f64>,
}

impl Tensor3 {
    pub fn new(n1: usize, n2: usize, n3: usize, data: Vec<f64>) -> Result<Self> {
        if n1 == 0 || n2 == 0 || n3 == 0 {
            return Err(Error::InvalidTensor(format!(
                "extents must be >= 1, got {n1}x{n2}x{n3}"
            )));
        }
        if data.len() != n1 * n2 * n3 {
            return Err(Error::InvalidTensor(format!(
                "{} values for a {n1}x{n2}x{n3} tensor",
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidTensor(format!("non-finite value at offset {pos}")));
        }
        Ok(Self { n1, n2, n3, data })
    }

    /// Panics on zero extents; use [`Tensor3::new`] for untrusted shapes.
    pub fn zeros(n1: usize, n2: usize, n3: usize) -> Self {
        assert!(n1 > 0 && n2 > 0 && n3 > 0, "extents must be >= 1");
        Self {
            n1,
            n2,
            n3,
            data: vec![0.0; n1 * n2 * n3],
        }
    }

    pub fn from_fn(n1: usize, n2: usize, n3: usize, mut f: impl FnMut(usize, usize, usize) -> f64) -> Self {
        let mut t = Self::zeros(n1, n2, n3);
        for k in 0..n3 {
            for i in 0..n1 {
                for j in 0..n2 {
                    t.data[(k * n1 + i) * n2 + j] = f(i, j, k);
                }
            }
        }
        t
    }

    /// Builds a tensor from its frontal slices.
    pub fn from_frontal_slices(slices: &[DMatrix<f64>]) -> Result<Self> {
        let first = slices
            .first()
            .ok_or_else(|| Error::InvalidTensor("no frontal slices".into()))?;
        let (n1, n2) = first.shape();
        if slices.iter().any(|s| s.shape() != (n1, n2)) {
            return Err(Error::ShapeMismatch("frontal slices differ in shape".into()));
        }
        let mut data = Vec::with_capacity(n1 * n2 * slices.len());
        for s in slices {
            for i in 0..n1 {
                for j in 0..n2 {
                    data.push(s[(i, j)]);
                }
            }
        }
        Self::new(n1, n2, slices.len(), data)
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize, usize) {
        (self.n1, self.n2, self.n3)
    }

    #[inline]
    pub fn n1(&self) -> usize {
        self.n1
    }

    #[inline]
    pub fn n2(&self) -> usize {
        self.n2
    }

    #[inline]
    pub fn n3(&self) -> usize {
        self.n3
    }

    #[inline]
    fn offset(&self, i: usize, j: usize, k: usize) -> usize {
        debug_assert!(i < self.n1 && j < self.n2 && k < self.n3);
        (k * self.n1 + i) * self.n2 + j
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[self.offset(i, j, k)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: f64) {
        let o = self.offset(i, j, k);
        self.data[o] = v;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn frontal(&self, k: usize) -> DMatrix<f64> {
        DMatrix::from_fn(self.n1, self.n2, |i, j| self.get(i, j, k))
    }

    /// Lateral slices `start..end` as an `n1 x (end-start) x n3` tensor.
    pub fn lateral_range(&self, start: usize, end: usize) -> Tensor3 {
        assert!(start < end && end <= self.n2);
        Tensor3::from_fn(self.n1, end - start, self.n3, |i, j, k| self.get(i, start + j, k))
    }

    /// Horizontal (mode-1) slices selected by `rows`, in that order.
    pub fn select_rows(&self, rows: &[usize]) -> Tensor3 {
        Tensor3::from_fn(rows.len(), self.n2, self.n3, |i, j, k| self.get(rows[i], j, k))
    }

    /// Lateral (mode-2) slices selected by `cols`, in that order.
    pub fn select_cols(&self, cols: &[usize]) -> Tensor3 {
        Tensor3::from_fn(self.n1, cols.len(), self.n3, |i, j, k| self.get(i, cols[j], k))
    }

    /// Exchanges modes 1 and 2 slice by slice, without the slice reversal
    /// of [`t_transpose`]. Converts between samples-as-rows and
    /// samples-as-lateral-slices layouts.
    pub fn swap_modes12(&self) -> Tensor3 {
        Tensor3::from_fn(self.n2, self.n1, self.n3, |i, j, k| self.get(j, i, k))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn scale(&self, s: f64) -> Tensor3 {
        self.map(|v| v * s)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Tensor3 {
        Tensor3 {
            n1: self.n1,
            n2: self.n2,
            n3: self.n3,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn add(&self, other: &Tensor3) -> Result<Tensor3> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Tensor3) -> Result<Tensor3> {
        self.zip_with(other, |a, b| a - b)
    }

    /// `self + alpha * other`
    pub fn axpy(&self, alpha: f64, other: &Tensor3) -> Result<Tensor3> {
        self.zip_with(other, |a, b| a + alpha * b)
    }

    fn zip_with(&self, other: &Tensor3, f: impl Fn(f64, f64) -> f64) -> Result<Tensor3> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch(format!(
                "{:?} vs {:?}",
                self.shape(),
                other.shape()
            )));
        }
        Ok(Tensor3 {
            n1: self.n1,
            n2: self.n2,
            n3: self.n3,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    /// `(A + A^T) / 2`; the f-symmetric part of a square tensor.
    pub fn symmetrized(&self) -> Result<Tensor3> {
        Ok(self.add(&t_transpose(self))?.scale(0.5))
    }
}
