use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use super::NumericsError;
use crate::scalar::{self, Scalar};

/// Dense column-major matrix over a real or complex field.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> DenseMatrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    /// Builds a matrix from a row-major slice.
    pub fn from_row_slice(rows: usize, cols: usize, values: &[S]) -> Result<Self, NumericsError> {
        if values.len() != rows * cols {
            return Err(NumericsError::Shape {
                expected: rows * cols,
                found: values.len(),
            });
        }
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = values[i * cols + j];
            }
        }
        Ok(m)
    }

    pub fn from_rows(rows: &[&[S]]) -> Result<Self, NumericsError> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(nrows, ncols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != ncols {
                return Err(NumericsError::Shape {
                    expected: ncols,
                    found: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        Ok(m)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for j in 0..cols {
            for i in 0..rows {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn diagonal(values: &[S]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn column(&self, j: usize) -> &[S] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    #[inline]
    pub fn column_mut(&mut self, j: usize) -> &mut [S] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn row(&self, i: usize) -> Vec<S> {
        (0..self.cols).map(|j| self[(i, j)]).collect()
    }

    /// Column-major backing storage.
    pub fn as_slice(&self) -> &[S] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        scalar::all_finite(&self.data)
    }

    pub fn frobenius_norm(&self) -> f64 {
        scalar::norm(&self.data)
    }

    pub fn max_abs(&self) -> f64 {
        scalar::norm_inf(&self.data)
    }

    /// `A·v`.
    pub fn mul_vec(&self, v: &[S]) -> Result<Vec<S>, NumericsError> {
        self.check_len(v.len(), self.cols)?;
        let mut out = vec![S::zero(); self.rows];
        for (j, &vj) in v.iter().enumerate() {
            scalar::axpy(vj, self.column(j), &mut out);
        }
        Ok(out)
    }

    /// `Aᴴ·v` (plain transpose for real matrices).
    pub fn adjoint_mul_vec(&self, v: &[S]) -> Result<Vec<S>, NumericsError> {
        self.check_len(v.len(), self.rows)?;
        Ok((0..self.cols).map(|j| scalar::dot(self.column(j), v)).collect())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self, NumericsError> {
        self.check_len(other.rows, self.cols)?;
        let mut out = Self::zeros(self.rows, other.cols);
        for j in 0..other.cols {
            for k in 0..self.cols {
                let b = other[(k, j)];
                if b == S::zero() {
                    continue;
                }
                let (src, dst) = (k * self.rows, j * self.rows);
                for i in 0..self.rows {
                    let a = self.data[src + i];
                    out.data[dst + i] += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scaled(&self, s: S) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&v| v * s).collect(),
        }
    }

    /// `self + s·other`.
    pub fn add_scaled(&self, s: S, other: &Self) -> Result<Self, NumericsError> {
        if self.shape() != other.shape() {
            return Err(NumericsError::Shape {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| a + s * b)
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// `A + u·vᴴ`.
    pub fn rank_one_update(&self, u: &[S], v: &[S]) -> Result<Self, NumericsError> {
        self.check_len(u.len(), self.rows)?;
        self.check_len(v.len(), self.cols)?;
        let mut out = self.clone();
        for j in 0..self.cols {
            let vj = v[j].conj();
            for i in 0..self.rows {
                out[(i, j)] += u[i] * vj;
            }
        }
        Ok(out)
    }

    fn check_len(&self, found: usize, expected: usize) -> Result<(), NumericsError> {
        if found == expected {
            Ok(())
        } else {
            Err(NumericsError::Shape { expected, found })
        }
    }
}

impl<S> Index<(usize, usize)> for DenseMatrix<S> {
    type Output = S;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &S {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i + j * self.rows]
    }
}

impl<S> IndexMut<(usize, usize)> for DenseMatrix<S> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i + j * self.rows]
    }
}
