use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::matrix::{all_finite, max_abs_diff, DenseMatrix};
use crate::norms::spectral_norm_raw;
use crate::problem::{objective_raw, ProblemSpec, Variant};

use super::sylvester::SylvesterSolver;
use super::{SolveReport, SolverKind, SolverOptions, IRLS_MU_FLOOR};

/// State handed to an IRLS observer after each Z-update.
#[derive(Debug)]
pub struct IrlsStep<'a> {
    pub iteration: usize,
    /// Diagonal of `U_t`, the weights the update was solved with.
    pub weights: &'a [f64],
    /// Smoothing parameter `mu_t` that will produce the next weights.
    pub mu: f64,
    pub z_prev: &'a DenseMatrix,
    pub z_next: &'a DenseMatrix,
}

/// IRLS for `min ||Z||_{2,1} + lambda/2 ||X - DZ||_F^2`.
///
/// Each iteration solves `Z U + lambda D^T D Z = lambda D^T X`, then sets
/// `U_ii = (||Z_i||^2 + mu^2)^(-1/2)` and decays `mu` by `rho` (floored at
/// [`IRLS_MU_FLOOR`]). Starts from `U = I`, `mu = irls_mu_scale * ||D||_2`
/// and stops when `||Z_t - Z_{t+1}||_inf < eps_tol`. The reported `E` is
/// `X - DZ`.
pub fn solve_irls(spec: &ProblemSpec, opts: &SolverOptions) -> Result<SolveReport> {
    solve_irls_observed(spec, opts, |_| {})
}

/// [`solve_irls`] with a callback invoked after every Z-update.
pub fn solve_irls_observed(
    spec: &ProblemSpec,
    opts: &SolverOptions,
    mut observer: impl FnMut(&IrlsStep<'_>),
) -> Result<SolveReport> {
    if spec.variant() != Variant::Plain {
        return Err(Error::invalid(
            "variant",
            format!("solver expects Plain, instance is {:?}", spec.variant()),
        ));
    }
    opts.validate()?;
    let x = &spec.x().0;
    let d = &spec.d().0;
    let (k, n) = (d.ncols(), x.ncols());
    let lambda = spec.lambda();

    let sylvester = SylvesterSolver::from_raw(d, lambda);
    let projected = sylvester.project_rhs(x);
    let mut mu = opts.irls_mu_scale * spectral_norm_raw(d)?;
    let mut weights = vec![1.0; n];
    let mut z = DenseMatrix::from_trusted(DMatrix::zeros(k, n));
    let mut previous = None;
    let mut objective_trace = Vec::new();
    let mut residual_trace = Vec::new();
    let mut converged = false;
    let residual_of = |z: &DMatrix<f64>| x - d * z;

    for t in 1..=opts.max_iter {
        let z_next = sylvester.solve_projected(&weights, &projected)?;
        if !all_finite(&z_next) {
            let partial = SolveReport {
                e: DenseMatrix::from_trusted(residual_of(&z.0)),
                z,
                previous,
                converged: false,
                iterations: t - 1,
                objective_trace,
                residual_trace,
                solver: SolverKind::Irls,
                multiplier: None,
                column_weights: None,
            };
            return Err(Error::NonFinite {
                iteration: t,
                partial: Box::new(partial),
            });
        }
        let z_next = DenseMatrix::from_trusted(z_next);
        observer(&IrlsStep {
            iteration: t,
            weights: &weights,
            mu,
            z_prev: &z,
            z_next: &z_next,
        });

        for (w, col) in weights.iter_mut().zip(z_next.0.column_iter()) {
            *w = (col.norm_squared() + mu * mu).powf(-0.5);
        }
        mu = (mu / opts.rho).max(IRLS_MU_FLOOR);

        let step = max_abs_diff(&z.0, &z_next.0);
        let e_next = residual_of(&z_next.0);
        objective_trace.push(objective_raw(
            Variant::Plain,
            lambda,
            0.0,
            &z_next.0,
            &e_next,
        ));
        residual_trace.push(step);
        let e_prev = DenseMatrix::from_trusted(residual_of(&z.0));
        previous = Some((std::mem::replace(&mut z, z_next), e_prev));
        if step < opts.eps_tol {
            converged = true;
            break;
        }
    }

    let e = DenseMatrix::from_trusted(residual_of(&z.0));
    Ok(SolveReport {
        z,
        e,
        previous,
        converged,
        iterations: objective_trace.len(),
        objective_trace,
        residual_trace,
        solver: SolverKind::Irls,
        multiplier: None,
        column_weights: None,
    })
}
