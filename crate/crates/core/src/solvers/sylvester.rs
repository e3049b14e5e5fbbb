use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{check_shape, Error, Result};
use crate::matrix::DenseMatrix;

/// Solver for `Z U + lambda D^T D Z = lambda D^T X` with diagonal `U`.
///
/// Because `U` is diagonal, column `i` satisfies
/// `(u_i I + lambda D^T D) z_i = lambda D^T x_i`. With `lambda D^T D = V L V^T`
/// factored once, each column is `V diag(1 / (u_i + L)) V^T b_i`.
#[derive(Debug, Clone)]
pub struct SylvesterSolver {
    eigenvectors: DMatrix<f64>,
    eigenvalues: DVector<f64>,
    scaled_dt: DMatrix<f64>,
}

impl SylvesterSolver {
    pub fn new(d: &DenseMatrix, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::invalid(
                "lambda",
                format!("{lambda} must be positive and finite"),
            ));
        }
        Ok(Self::from_raw(&d.0, lambda))
    }

    pub(crate) fn from_raw(d: &DMatrix<f64>, lambda: f64) -> Self {
        let scaled_dt = d.transpose() * lambda;
        let gram = &scaled_dt * d;
        let eig = SymmetricEigen::new(gram);
        Self {
            eigenvectors: eig.eigenvectors,
            // the Gram matrix is PSD; clip rounding noise below zero
            eigenvalues: eig.eigenvalues.map(|v| v.max(0.0)),
            scaled_dt,
        }
    }

    pub fn atoms(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `V^T lambda D^T X`, the part of the right-hand side that does not
    /// depend on `U`.
    pub(crate) fn project_rhs(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        self.eigenvectors.transpose() * (&self.scaled_dt * x)
    }

    pub(crate) fn solve_projected(
        &self,
        weights: &[f64],
        projected: &DMatrix<f64>,
    ) -> Result<DMatrix<f64>> {
        let mut scaled = projected.clone();
        for (i, mut col) in scaled.column_iter_mut().enumerate() {
            let u = weights[i];
            for (entry, &ev) in col.iter_mut().zip(self.eigenvalues.iter()) {
                let denom = u + ev;
                if !(denom > 0.0 && denom.is_finite()) {
                    return Err(Error::SingularSystem { column: i });
                }
                *entry /= denom;
            }
        }
        Ok(&self.eigenvectors * scaled)
    }

    /// Solves for `Z` given the diagonal of `U` (one positive weight per column of `X`).
    pub fn solve(&self, weights: &[f64], x: &DenseMatrix) -> Result<DenseMatrix> {
        check_shape("X", (self.scaled_dt.ncols(), weights.len()), x.shape())?;
        check_weights(weights)?;
        let z = self.solve_projected(weights, &self.project_rhs(&x.0))?;
        DenseMatrix::new(z).map_err(|_| Error::SingularSystem { column: 0 })
    }
}

pub(crate) fn check_weights(weights: &[f64]) -> Result<()> {
    if let Some(bad) = weights.iter().find(|&&u| !(u > 0.0 && u.is_finite())) {
        return Err(Error::invalid(
            "U",
            format!("diagonal entry {bad} must be positive"),
        ));
    }
    Ok(())
}

/// One-shot solve of `Z diag(u) + lambda D^T D Z = lambda D^T X`.
pub fn sylvester_diag_solve(
    d: &DenseMatrix,
    u: &[f64],
    x: &DenseMatrix,
    lambda: f64,
) -> Result<DenseMatrix> {
    SylvesterSolver::new(d, lambda)?.solve(u, x)
}
