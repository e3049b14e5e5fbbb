use std::fmt;
use std::ops::Index;

use nalgebra::{DMatrix, DVectorView};

use crate::error::{Error, Result};

/// Dense real matrix with positive dimensions and finite entries.
///
/// Storage is column-major (it wraps a `nalgebra::DMatrix<f64>`); entries are
/// addressed as `(row, col)`.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix(pub(crate) DMatrix<f64>);

impl DenseMatrix {
    /// Validates dimensions and finiteness of an existing nalgebra matrix.
    pub fn new(inner: DMatrix<f64>) -> Result<Self> {
        let (rows, cols) = inner.shape();
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyDimension { rows, cols });
        }
        if let Some(idx) = inner.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteEntry {
                row: idx % rows,
                col: idx / rows,
                value: inner[idx],
            });
        }
        Ok(Self(inner))
    }

    /// Builds a matrix from entries listed row by row.
    pub fn from_row_slice(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyDimension { rows, cols });
        }
        if data.len() != rows * cols {
            return Err(Error::EntryCount {
                rows,
                cols,
                expected: rows * cols,
                actual: data.len(),
            });
        }
        Self::new(DMatrix::from_row_slice(rows, cols, data))
    }

    /// Builds a matrix from equal-length rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(nrows * ncols);
        for row in rows {
            let row = row.as_ref();
            if row.len() != ncols {
                return Err(Error::EntryCount {
                    rows: nrows,
                    cols: ncols,
                    expected: nrows * ncols,
                    actual: data.len() + row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::from_row_slice(nrows, ncols, &data)
    }

    /// # Panics
    /// If either dimension is zero.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self(DMatrix::zeros(rows, cols))
    }

    /// # Panics
    /// If `n` is zero.
    pub fn identity(n: usize) -> Self {
        assert!(n > 0, "matrix dimensions must be positive");
        Self(DMatrix::identity(n, n))
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        let n = diag.len();
        if n == 0 {
            return Err(Error::EmptyDimension { rows: 0, cols: 0 });
        }
        Self::new(DMatrix::from_fn(
            n,
            n,
            |i, j| if i == j { diag[i] } else { 0.0 },
        ))
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        Self::new(DMatrix::from_fn(rows, cols, f))
    }

    /// Wraps a matrix produced by internal arithmetic; callers guarantee the invariants.
    pub(crate) fn from_trusted(inner: DMatrix<f64>) -> Self {
        debug_assert!(inner.nrows() > 0 && inner.ncols() > 0);
        Self(inner)
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.0.shape()
    }

    pub fn get(&self, row: usize, col: usize) -> Option<f64> {
        self.0.get((row, col)).copied()
    }

    pub fn column(&self, col: usize) -> DVectorView<'_, f64> {
        self.0.column(col)
    }

    /// Entries in row-major order.
    pub fn to_row_major(&self) -> Vec<f64> {
        self.0.transpose().as_slice().to_vec()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.0
    }

    /// Euclidean norm of every column.
    pub fn column_norms(&self) -> Vec<f64> {
        column_norms(&self.0)
    }

    /// `c * self`. Fails if the product overflows.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(&self.0 * c)
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    /// Matrix product `self * rhs`.
    pub fn matmul(&self, rhs: &DenseMatrix) -> Result<Self> {
        if self.cols() != rhs.rows() {
            return Err(Error::ShapeMismatch {
                what: "matmul right operand",
                expected: (self.cols(), rhs.cols()),
                actual: rhs.shape(),
            });
        }
        Self::new(&self.0 * &rhs.0)
    }

    /// Entry-wise `self - rhs`.
    pub fn sub(&self, rhs: &DenseMatrix) -> Result<Self> {
        crate::error::check_shape("subtrahend", self.shape(), rhs.shape())?;
        Self::new(&self.0 - &rhs.0)
    }

    /// Returns a copy with the columns rearranged so that column `j` of the
    /// result is column `perm[j]` of `self`.
    pub fn select_columns(&self, perm: &[usize]) -> Result<Self> {
        if let Some(&bad) = perm.iter().find(|&&c| c >= self.cols()) {
            return Err(Error::invalid(
                "column index",
                format!("{bad} out of range"),
            ));
        }
        Self::new(self.0.select_columns(perm))
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    fn index(&self, idx: (usize, usize)) -> &f64 {
        &self.0[idx]
    }
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "DenseMatrix {}x{} {:?}",
            self.rows(),
            self.cols(),
            self.to_row_major()
        )
    }
}

pub(crate) fn column_norms(m: &DMatrix<f64>) -> Vec<f64> {
    m.column_iter().map(|c| c.norm()).collect()
}

pub(crate) fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

pub(crate) fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .fold(0.0_f64, |acc, (x, y)| acc.max((x - y).abs()))
}

pub(crate) fn all_finite(m: &DMatrix<f64>) -> bool {
    m.iter().all(|v| v.is_finite())
}
