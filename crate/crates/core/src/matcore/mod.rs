//! Dense matrices, validated matrix classes, support patterns and the
//! centering projection onto the complement of the consensus direction.

mod centering;
mod classes;
pub mod io;
mod pattern;

use std::fmt;

use thiserror::Error;

use crate::Scalar;

pub use centering::{centering, CenteringProjection, ProjectionForm};
pub use classes::{
    equal_row_sum, row_sums, validate_stochastic, EqualRowSumMatrix, StochasticMatrix,
};
pub use pattern::{pattern, PatternMatrix};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MatrixError {
    #[error("matrix must have at least one row and one column (got {rows}x{cols})")]
    Empty { rows: usize, cols: usize },
    #[error("expected {expected} entries for a {rows}x{cols} matrix, got {actual}")]
    Length {
        rows: usize,
        cols: usize,
        expected: usize,
        actual: usize,
    },
    #[error("row {row} has {actual} entries, expected {expected}")]
    RaggedRow {
        row: usize,
        expected: usize,
        actual: usize,
    },
    #[error("entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },
    #[error("dimension mismatch: {left_rows}x{left_cols} vs {right_rows}x{right_cols}")]
    DimensionMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },
    #[error("entry ({row}, {col}) = {value} is negative (beyond tolerance {tol})")]
    NegativeEntry {
        row: usize,
        col: usize,
        value: f64,
        tol: f64,
    },
    #[error("row {row} sums to {sum}, deviation {deviation} from {target} exceeds tolerance {tol}")]
    RowSum {
        row: usize,
        sum: f64,
        target: f64,
        deviation: f64,
        tol: f64,
    },
    #[error("projection check failed: {0}")]
    Projection(String),
}

/// Dense real matrix stored row-major. Entries are always finite.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self, MatrixError> {
        if rows == 0 || cols == 0 {
            return Err(MatrixError::Empty { rows, cols });
        }
        if data.len() != rows * cols {
            return Err(MatrixError::Length {
                rows,
                cols,
                expected: rows * cols,
                actual: data.len(),
            });
        }
        if let Some(k) = data.iter().position(|x| !x.is_finite()) {
            return Err(MatrixError::NonFinite {
                row: k / cols,
                col: k % cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows<R: AsRef<[T]>>(rows: &[R]) -> Result<Self, MatrixError> {
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(n * m);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != m {
                return Err(MatrixError::RaggedRow {
                    row: i,
                    expected: m,
                    actual: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Self::new(n, m, data)
    }

    /// Builds from `f64` rows, converting each entry to `T`.
    pub fn from_f64_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self, MatrixError> {
        let converted: Vec<Vec<T>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| T::lit(x)).collect())
            .collect();
        Self::from_rows(&converted)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, T::zero())
    }

    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    /// The consensus matrix `𝟏c`: `rows` copies of the row vector `c`.
    pub fn consensus(rows: usize, c: &[T]) -> Self {
        assert!(!c.is_empty(), "consensus row must be nonempty");
        let mut data = Vec::with_capacity(rows * c.len());
        for _ in 0..rows {
            data.extend_from_slice(c);
        }
        Self {
            rows,
            cols: c.len(),
            data,
        }
    }

    /// `(1/n)𝟏𝟏′`, the averaging matrix.
    pub fn averaging(n: usize) -> Self {
        Self::filled(n, n, T::one() / T::from_usize_lossy(n))
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
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
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[T]> + '_ {
        self.data.chunks_exact(self.cols)
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.row_iter().map(<[T]>::to_vec).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    pub fn scale(&self, a: T) -> Self {
        self.map(|x| x * a)
    }

    fn check_same_shape(&self, other: &Self) -> Result<(), MatrixError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(self.mismatch(other));
        }
        Ok(())
    }

    fn mismatch(&self, other: &Self) -> MatrixError {
        MatrixError::DimensionMismatch {
            left_rows: self.rows,
            left_cols: self.cols,
            right_rows: other.rows,
            right_cols: other.cols,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, MatrixError> {
        self.check_same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, MatrixError> {
        self.check_same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| a - b).collect(),
        })
    }

    /// `M + 𝟏c`: adds the row vector `c` to every row.
    pub fn add_to_rows(&self, c: &[T]) -> Result<Self, MatrixError> {
        if c.len() != self.cols {
            return Err(MatrixError::DimensionMismatch {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: 1,
                right_cols: c.len(),
            });
        }
        Ok(Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)] + c[j]))
    }

    pub fn matmul(&self, other: &Self) -> Result<Self, MatrixError> {
        if self.cols != other.rows {
            return Err(self.mismatch(other));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let lhs = self.row(i);
            let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for (k, &a) in lhs.iter().enumerate() {
                if a == T::zero() {
                    continue;
                }
                for (d, &b) in dst.iter_mut().zip(other.row(k)) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[T]) -> Result<Vec<T>, MatrixError> {
        if x.len() != self.cols {
            return Err(MatrixError::DimensionMismatch {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: x.len(),
                right_cols: 1,
            });
        }
        Ok(self
            .row_iter()
            .map(|r| r.iter().zip(x).map(|(&a, &b)| a * b).sum())
            .collect())
    }

    /// Row vector times matrix: `x′M`.
    pub fn vec_mul(&self, x: &[T]) -> Result<Vec<T>, MatrixError> {
        if x.len() != self.rows {
            return Err(MatrixError::DimensionMismatch {
                left_rows: 1,
                left_cols: x.len(),
                right_rows: self.rows,
                right_cols: self.cols,
            });
        }
        let mut out = vec![T::zero(); self.cols];
        for (r, &xi) in self.row_iter().zip(x) {
            for (o, &a) in out.iter_mut().zip(r) {
                *o += xi * a;
            }
        }
        Ok(out)
    }

    pub fn column_means(&self) -> Vec<T> {
        let n = T::from_usize_lossy(self.rows);
        let mut sums = vec![T::zero(); self.cols];
        for r in self.row_iter() {
            for (s, &x) in sums.iter_mut().zip(r) {
                *s += x;
            }
        }
        sums.into_iter().map(|s| s / n).collect()
    }

    pub fn column_sums(&self) -> Vec<T> {
        let mut sums = vec![T::zero(); self.cols];
        for r in self.row_iter() {
            for (s, &x) in sums.iter_mut().zip(r) {
                *s += x;
            }
        }
        sums
    }

    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, x| m.max(x.abs()))
    }

    /// Induced ∞-norm: maximum absolute row sum.
    pub fn norm_inf(&self) -> T {
        self.row_iter()
            .map(|r| r.iter().map(|x| x.abs()).sum::<T>())
            .fold(T::zero(), T::max)
    }

    /// Induced 1-norm: maximum absolute column sum.
    pub fn norm_1(&self) -> T {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].abs()).sum::<T>())
            .fold(T::zero(), T::max)
    }

    pub fn frobenius(&self) -> T {
        self.data.iter().map(|&x| x * x).sum::<T>().sqrt()
    }

    /// Largest entrywise deviation between two equally shaped matrices.
    pub fn max_abs_diff(&self, other: &Self) -> Result<T, MatrixError> {
        self.check_same_shape(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs())))
    }

    /// True when every row equals the first row within `tol`.
    pub fn is_consensus(&self, tol: T) -> bool {
        let first = self.row(0);
        self.row_iter()
            .all(|r| r.iter().zip(first).all(|(&a, &b)| (a - b).abs() <= tol))
    }

    /// Converts entries to another scalar type.
    pub fn cast<U: Scalar>(&self) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| U::lit(x.as_f64())).collect(),
        }
    }
}

impl<T> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in self.data.chunks(self.cols) {
            writeln!(f, "  {r:?}")?;
        }
        write!(f, "]")
    }
}

impl<T: Scalar> serde::Serialize for Matrix<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Matrix", 1)?;
        st.serialize_field("rows", &self.to_rows())?;
        st.end()
    }
}
