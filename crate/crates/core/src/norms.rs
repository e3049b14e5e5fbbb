//! Matrix norms. Column-structured norms treat each column as one group:
//! `||M||_{q,1} = sum_i ||M_i||_q` over columns `M_i`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{max_abs, DenseMatrix};

/// Exponent `q` of a column `l_{q,1}` norm; restricted to `(0, 1]` or exactly 2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Exponent(f64);

impl Exponent {
    pub fn new(q: f64) -> Result<Self> {
        if (q > 0.0 && q <= 1.0) || q == 2.0 {
            Ok(Self(q))
        } else {
            Err(Error::invalid(
                "q",
                format!("{q} is not in (0, 1] or equal to 2"),
            ))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum NormKind {
    Frobenius,
    EntrywiseL1,
    EntrywiseLInf,
    /// Sum of Euclidean column norms.
    ColumnL21,
    /// Sum over columns of `(sum_j |m_ji|^q)^(1/q)`.
    ColumnLq1(Exponent),
}

pub fn matrix_norm(m: &DenseMatrix, kind: NormKind) -> f64 {
    norm_raw(&m.0, kind)
}

pub(crate) fn norm_raw(m: &DMatrix<f64>, kind: NormKind) -> f64 {
    match kind {
        NormKind::Frobenius => m.norm(),
        NormKind::EntrywiseL1 => l1(m),
        NormKind::EntrywiseLInf => max_abs(m),
        NormKind::ColumnL21 => l21(m),
        NormKind::ColumnLq1(q) if q.value() == 2.0 => l21(m),
        NormKind::ColumnLq1(q) => {
            let q = q.value();
            m.column_iter()
                .map(|c| c.iter().map(|v| v.abs().powf(q)).sum::<f64>().powf(1.0 / q))
                .sum()
        }
    }
}

pub(crate) fn l21(m: &DMatrix<f64>) -> f64 {
    m.column_iter().map(|c| c.norm()).sum()
}

pub(crate) fn l1(m: &DMatrix<f64>) -> f64 {
    m.iter().map(|v| v.abs()).sum()
}

/// Below this size the largest singular value comes from a full SVD.
const EXACT_SVD_MAX_DIM: usize = 64;

/// Largest singular value.
///
/// Small matrices (`min(rows, cols) <= 64`) use a full SVD; larger ones take
/// the largest eigenvalue of the smaller Gram matrix (`M M^T` or `M^T M`).
pub fn spectral_norm(m: &DenseMatrix) -> Result<f64> {
    spectral_norm_raw(&m.0)
}

pub(crate) fn spectral_norm_raw(m: &DMatrix<f64>) -> Result<f64> {
    if max_abs(m) == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    if m.nrows().min(m.ncols()) <= EXACT_SVD_MAX_DIM {
        Ok(m.singular_values().max())
    } else {
        let gram = if m.nrows() <= m.ncols() {
            m * m.transpose()
        } else {
            m.transpose() * m
        };
        let top = gram.symmetric_eigenvalues().max();
        Ok(top.max(0.0).sqrt())
    }
}
