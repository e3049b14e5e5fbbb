use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{check_shape, Error, Result};
use crate::matrix::DenseMatrix;
use crate::norms::{l1, l21};

/// Which regularized problem an instance poses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// `||Z||_{2,1} + lambda/2 ||E||_F^2` s.t. `X = DZ + E`.
    Plain,
    /// `||Z||_{2,1} + lambda/2 ||E W||_F^2` with `W = diag(||Z_i||_2)`.
    Weighted,
    /// `||Z||_1 + beta ||Z||_{2,1} + lambda/2 ||E||_F^2`.
    Sparse,
}

/// A validated problem instance: data `X` (m x n), dictionary `D` (m x k) and
/// the penalty weights.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    x: DenseMatrix,
    d: DenseMatrix,
    variant: Variant,
    lambda: f64,
    beta: f64,
}

impl ProblemSpec {
    pub fn new(
        x: DenseMatrix,
        d: DenseMatrix,
        variant: Variant,
        lambda: f64,
        beta: f64,
    ) -> Result<Self> {
        if x.rows() != d.rows() {
            return Err(Error::ShapeMismatch {
                what: "dictionary rows",
                expected: (x.rows(), d.cols()),
                actual: d.shape(),
            });
        }
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::invalid(
                "lambda",
                format!("{lambda} must be positive and finite"),
            ));
        }
        if !(beta >= 0.0 && beta.is_finite()) {
            return Err(Error::invalid(
                "beta",
                format!("{beta} must be nonnegative and finite"),
            ));
        }
        if variant == Variant::Sparse && beta == 0.0 {
            return Err(Error::invalid(
                "beta",
                "the sparse variant requires beta > 0",
            ));
        }
        if d.column_norms().iter().all(|&n| n == 0.0) {
            return Err(Error::invalid("dictionary", "every column has zero norm"));
        }
        Ok(Self {
            x,
            d,
            variant,
            lambda,
            beta,
        })
    }

    pub fn plain(x: DenseMatrix, d: DenseMatrix, lambda: f64) -> Result<Self> {
        Self::new(x, d, Variant::Plain, lambda, 0.0)
    }

    pub fn weighted(x: DenseMatrix, d: DenseMatrix, lambda: f64) -> Result<Self> {
        Self::new(x, d, Variant::Weighted, lambda, 0.0)
    }

    pub fn sparse(x: DenseMatrix, d: DenseMatrix, lambda: f64, beta: f64) -> Result<Self> {
        Self::new(x, d, Variant::Sparse, lambda, beta)
    }

    pub fn x(&self) -> &DenseMatrix {
        &self.x
    }

    pub fn d(&self) -> &DenseMatrix {
        &self.d
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Ambient dimension m.
    pub fn dim(&self) -> usize {
        self.x.rows()
    }

    /// Dictionary size k.
    pub fn atoms(&self) -> usize {
        self.d.cols()
    }

    /// Sample count n.
    pub fn samples(&self) -> usize {
        self.x.cols()
    }

    /// Same instance with a different variant tag.
    pub fn with_variant(&self, variant: Variant, beta: f64) -> Result<Self> {
        Self::new(self.x.clone(), self.d.clone(), variant, self.lambda, beta)
    }

    pub(crate) fn check_z(&self, z: &DenseMatrix) -> Result<()> {
        check_shape("Z", (self.atoms(), self.samples()), z.shape())
    }

    pub(crate) fn check_e(&self, e: &DenseMatrix) -> Result<()> {
        check_shape("E", (self.dim(), self.samples()), e.shape())
    }
}

/// Constrained objective at `(Z, E)`; penalty terms only, the constraint
/// `X = DZ + E` is not checked.
pub fn objective_value(spec: &ProblemSpec, z: &DenseMatrix, e: &DenseMatrix) -> Result<f64> {
    spec.check_z(z)?;
    spec.check_e(e)?;
    Ok(objective_raw(
        spec.variant,
        spec.lambda,
        spec.beta,
        &z.0,
        &e.0,
    ))
}

/// Objective with `E` eliminated as `X - DZ`.
pub fn reduced_objective(spec: &ProblemSpec, z: &DenseMatrix) -> Result<f64> {
    spec.check_z(z)?;
    let e = &spec.x.0 - &spec.d.0 * &z.0;
    Ok(objective_raw(
        spec.variant,
        spec.lambda,
        spec.beta,
        &z.0,
        &e,
    ))
}

pub(crate) fn objective_raw(
    variant: Variant,
    lambda: f64,
    beta: f64,
    z: &DMatrix<f64>,
    e: &DMatrix<f64>,
) -> f64 {
    match variant {
        Variant::Plain => l21(z) + 0.5 * lambda * e.norm_squared(),
        Variant::Weighted => {
            let weighted: f64 = z
                .column_iter()
                .zip(e.column_iter())
                .map(|(zc, ec)| zc.norm_squared() * ec.norm_squared())
                .sum();
            l21(z) + 0.5 * lambda * weighted
        }
        Variant::Sparse => l1(z) + beta * l21(z) + 0.5 * lambda * e.norm_squared(),
    }
}
