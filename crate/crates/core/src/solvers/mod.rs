//! Solvers for the l2,1-regularized representation problems.
//!
//! * [`solve_ladmap`]: linearized ADM with adaptive penalty for the plain problem.
//! * [`solve_irls`]: iteratively reweighted least squares on the reduced problem
//!   `||Z||_{2,1} + lambda/2 ||X - DZ||_F^2`.
//! * [`solve_weighted_ladmap`]: the column-weighted loss, with weights lagged
//!   across outer rounds.
//! * [`solve_sparse_ladmap`]: the `||Z||_1 + beta ||Z||_{2,1}` penalty.

mod irls;
mod ladmap;
mod sylvester;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

pub use irls::{solve_irls, solve_irls_observed, IrlsStep};
pub use ladmap::{
    ladmap_e_step, ladmap_z_step, solve_ladmap, solve_sparse_ladmap, solve_weighted_ladmap,
};
pub use sylvester::{sylvester_diag_solve, SylvesterSolver};

/// Smallest smoothing parameter IRLS decays to.
pub const IRLS_MU_FLOOR: f64 = 1e-12;

/// Schedule and stopping parameters shared by all solvers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Initial penalty `mu` (LADMAP family).
    pub mu0: f64,
    pub mu_max: f64,
    /// Penalty growth factor (LADMAP) or smoothing decay factor (IRLS).
    pub rho: f64,
    pub eps_tol: f64,
    pub max_iter: usize,
    /// IRLS starts from `mu = irls_mu_scale * ||D||_2`.
    pub irls_mu_scale: f64,
    pub weighted_outer_iters: usize,
    pub weight_floor: f64,
}

impl SolverOptions {
    /// `mu0=1e-3, mu_max=1e10, rho=1.05, eps=1e-6, max_iter=1000`.
    pub fn ladmap() -> Self {
        Self {
            mu0: 1e-3,
            mu_max: 1e10,
            rho: 1.05,
            eps_tol: 1e-6,
            max_iter: 1000,
            irls_mu_scale: 0.1,
            weighted_outer_iters: 5,
            weight_floor: 1e-6,
        }
    }

    /// LADMAP defaults with `rho=1.1, max_iter=500`.
    pub fn irls() -> Self {
        Self {
            rho: 1.1,
            max_iter: 500,
            ..Self::ladmap()
        }
    }

    /// Defaults appropriate for the given solver.
    pub fn for_solver(kind: SolverKind) -> Self {
        match kind {
            SolverKind::Irls => Self::irls(),
            _ => Self::ladmap(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &'static str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::invalid(
                    name,
                    format!("{v} must be positive and finite"),
                ))
            }
        };
        positive("mu0", self.mu0)?;
        positive("mu_max", self.mu_max)?;
        positive("eps_tol", self.eps_tol)?;
        positive("irls_mu_scale", self.irls_mu_scale)?;
        if self.mu0 > self.mu_max {
            return Err(Error::invalid(
                "mu0",
                format!("{} exceeds mu_max {}", self.mu0, self.mu_max),
            ));
        }
        if !(self.rho > 1.0 && self.rho.is_finite()) {
            return Err(Error::invalid("rho", format!("{} must exceed 1", self.rho)));
        }
        if self.max_iter == 0 {
            return Err(Error::invalid("max_iter", "must be at least 1"));
        }
        if self.weighted_outer_iters == 0 {
            return Err(Error::invalid("weighted_outer_iters", "must be at least 1"));
        }
        if !(self.weight_floor >= 0.0 && self.weight_floor.is_finite()) {
            return Err(Error::invalid(
                "weight_floor",
                format!("{} must be nonnegative", self.weight_floor),
            ));
        }
        Ok(())
    }
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self::ladmap()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    Ladmap,
    Irls,
    Weighted,
    Sparse,
}

impl SolverKind {
    pub fn label(self) -> &'static str {
        match self {
            SolverKind::Ladmap => "ladmap",
            SolverKind::Irls => "irls",
            SolverKind::Weighted => "weighted",
            SolverKind::Sparse => "sparse",
        }
    }
}

impl std::str::FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ladmap" => Ok(SolverKind::Ladmap),
            "irls" => Ok(SolverKind::Irls),
            "weighted" => Ok(SolverKind::Weighted),
            "sparse" => Ok(SolverKind::Sparse),
            other => Err(Error::invalid(
                "solver",
                format!("unknown solver {other:?}"),
            )),
        }
    }
}

/// Outcome of a solve.
///
/// `objective_trace[t]` and `residual_trace[t]` describe the iterate produced
/// by iteration `t + 1`. For the LADMAP family the residual is
/// `||X - DZ - E||_inf`; for IRLS it is `||Z_t - Z_{t+1}||_inf`.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub z: DenseMatrix,
    pub e: DenseMatrix,
    /// Iterate before the final one, `None` when no iteration completed.
    pub previous: Option<(DenseMatrix, DenseMatrix)>,
    pub converged: bool,
    pub iterations: usize,
    pub objective_trace: Vec<f64>,
    pub residual_trace: Vec<f64>,
    pub solver: SolverKind,
    /// Final Lagrange multiplier `Y` (LADMAP family only).
    pub multiplier: Option<DenseMatrix>,
    /// Column weights `max(||Z_i||_2, weight_floor)` at the final `Z`
    /// (weighted solver only).
    pub column_weights: Option<Vec<f64>>,
}

impl SolveReport {
    pub fn final_objective(&self) -> Option<f64> {
        self.objective_trace.last().copied()
    }

    pub fn final_residual(&self) -> Option<f64> {
        self.residual_trace.last().copied()
    }
}
