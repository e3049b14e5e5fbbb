//! Robust dictionary-based representation.
//!
//! Given data `X` (m x n) and a dictionary `D` (m x k), find coefficients `Z`
//! and error `E` with `X = DZ + E` while penalizing `||Z||_{2,1}` (the sum of
//! column norms of `Z`). Samples that the dictionary cannot represent end up
//! with all-zero coefficient columns, which is what [`detection`] uses to
//! flag them.
//!
//! The `l2,1` convention here is column-wise throughout: each column is one
//! group.

pub mod detection;
pub mod error;
pub mod matrix;
pub mod norms;
pub mod problem;
pub mod prox;
pub mod solvers;
pub mod synthetic;

#[cfg(test)]
mod testutil;

pub use detection::{
    detection_metrics, flag_corrupted, score_columns, DetectionResult, Metrics, Strategy,
};
pub use error::{Error, Result};
pub use matrix::DenseMatrix;
pub use norms::{matrix_norm, spectral_norm, Exponent, NormKind};
pub use problem::{objective_value, reduced_objective, ProblemSpec, Variant};
pub use prox::{prox_l21_columns, prox_sparse_group, soft_threshold};
pub use solvers::{
    ladmap_e_step, ladmap_z_step, solve_irls, solve_irls_observed, solve_ladmap,
    solve_sparse_ladmap, solve_weighted_ladmap, sylvester_diag_solve, IrlsStep, SolveReport,
    SolverKind, SolverOptions, SylvesterSolver,
};
pub use synthetic::{
    generate_dictionary, generate_instance, CorruptionGroundTruth, GenSpec, SyntheticInstance,
};
