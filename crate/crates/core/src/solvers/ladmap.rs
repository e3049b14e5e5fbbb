use nalgebra::DMatrix;

use crate::error::{check_shape, Error, Result};
use crate::matrix::{all_finite, column_norms, max_abs, max_abs_diff, DenseMatrix};
use crate::norms::spectral_norm_raw;
use crate::problem::{objective_raw, ProblemSpec, Variant};
#[cfg(test)]
use crate::prox::soft_threshold_entries;
use crate::prox::{shrink_columns, sparse_group_shrink};

use super::{SolveReport, SolverKind, SolverOptions};

/// Penalty whose proximal map forms the Z-step.
#[derive(Debug, Clone, Copy)]
pub(crate) enum ZPenalty {
    /// `||Z||_{2,1}`
    Group,
    /// `||Z||_1 + beta ||Z||_{2,1}`
    SparseGroup { beta: f64 },
    /// `||Z||_1`
    #[cfg(test)]
    L1,
}

impl ZPenalty {
    fn apply(self, m: &mut DMatrix<f64>, step: f64) {
        match self {
            ZPenalty::Group => shrink_columns(m, step),
            ZPenalty::SparseGroup { beta } => sparse_group_shrink(m, step, beta * step),
            #[cfg(test)]
            ZPenalty::L1 => soft_threshold_entries(m, step),
        }
    }
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn z_step_raw(
    z: &DMatrix<f64>,
    e: &DMatrix<f64>,
    y: &DMatrix<f64>,
    x: &DMatrix<f64>,
    d: &DMatrix<f64>,
    mu: f64,
    eta: f64,
    penalty: ZPenalty,
) -> DMatrix<f64> {
    let mut r = x - d * z - e;
    r.zip_apply(y, |a, b| *a += b / mu);
    let mut arg = d.tr_mul(&r);
    arg /= eta;
    arg += z;
    penalty.apply(&mut arg, 1.0 / (mu * eta));
    arg
}

/// `E = diag-scaled (X + Y/mu - D Z)` where column `i` is scaled by
/// `mu / (penalty_i + mu)`; `penalty_i` is `lambda` for the plain loss and
/// `lambda w_i^2` for the weighted one.
fn e_step_raw(
    dz: &DMatrix<f64>,
    y: &DMatrix<f64>,
    x: &DMatrix<f64>,
    mu: f64,
    penalties: &[f64],
) -> DMatrix<f64> {
    let mut e = x - dz;
    e.zip_apply(y, |a, b| *a += b / mu);
    for (mut col, &p) in e.column_iter_mut().zip(penalties) {
        col *= mu / (p + mu);
    }
    e
}

fn check_step_inputs(x: &DenseMatrix, d: &DenseMatrix, mu: f64) -> Result<(usize, usize, usize)> {
    if x.rows() != d.rows() {
        return Err(Error::ShapeMismatch {
            what: "D",
            expected: (x.rows(), d.cols()),
            actual: d.shape(),
        });
    }
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(Error::invalid(
            "mu",
            format!("{mu} must be positive and finite"),
        ));
    }
    Ok((x.rows(), d.cols(), x.cols()))
}

/// One linearized Z-update:
/// `Theta_{1/(mu eta)}(Z + D^T (X - DZ - E + Y/mu) / eta)` with `Theta` the
/// column group shrinkage.
#[allow(clippy::too_many_arguments)]
pub fn ladmap_z_step(
    z: &DenseMatrix,
    e: &DenseMatrix,
    y: &DenseMatrix,
    x: &DenseMatrix,
    d: &DenseMatrix,
    mu: f64,
    eta: f64,
) -> Result<DenseMatrix> {
    let (m, k, n) = check_step_inputs(x, d, mu)?;
    check_shape("Z", (k, n), z.shape())?;
    check_shape("E", (m, n), e.shape())?;
    check_shape("Y", (m, n), y.shape())?;
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(Error::invalid(
            "eta",
            format!("{eta} must be positive and finite"),
        ));
    }
    DenseMatrix::new(z_step_raw(
        &z.0,
        &e.0,
        &y.0,
        &x.0,
        &d.0,
        mu,
        eta,
        ZPenalty::Group,
    ))
}

/// Closed-form E-update `mu/(lambda + mu) (X + Y/mu - D Z_next)`.
pub fn ladmap_e_step(
    z_next: &DenseMatrix,
    y: &DenseMatrix,
    x: &DenseMatrix,
    d: &DenseMatrix,
    mu: f64,
    lambda: f64,
) -> Result<DenseMatrix> {
    let (m, k, n) = check_step_inputs(x, d, mu)?;
    check_shape("Z", (k, n), z_next.shape())?;
    check_shape("Y", (m, n), y.shape())?;
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::invalid(
            "lambda",
            format!("{lambda} must be positive and finite"),
        ));
    }
    let dz = &d.0 * &z_next.0;
    DenseMatrix::new(e_step_raw(&dz, &y.0, &x.0, mu, &vec![lambda; n]))
}

/// Everything the shared loop needs beyond the options.
pub(crate) struct LadmapRun<'a> {
    pub spec: &'a ProblemSpec,
    pub penalty: ZPenalty,
    /// Per-column E-step penalty (`lambda` or `lambda w_i^2`).
    pub error_penalties: Vec<f64>,
    pub kind: SolverKind,
}

impl LadmapRun<'_> {
    pub(crate) fn run(&self, opts: &SolverOptions) -> Result<SolveReport> {
        opts.validate()?;
        let spec = self.spec;
        let x = &spec.x().0;
        let d = &spec.d().0;
        let (m, n) = x.shape();
        let k = d.ncols();
        let eta = spectral_norm_raw(d)?.powi(2);
        if !eta.is_finite() {
            return Err(Error::invalid("dictionary", "||D||_2^2 overflows"));
        }

        let mut z = DMatrix::zeros(k, n);
        let mut e = DMatrix::zeros(m, n);
        let mut y = DMatrix::zeros(m, n);
        let mut previous = None;
        let mut mu = opts.mu0;
        let mut objective_trace = Vec::new();
        let mut residual_trace = Vec::new();
        let mut converged = false;

        for t in 1..=opts.max_iter {
            let z_next = z_step_raw(&z, &e, &y, x, d, mu, eta, self.penalty);
            let dz = d * &z_next;
            let e_next = e_step_raw(&dz, &y, x, mu, &self.error_penalties);
            let residual = x - &dz - &e_next;
            y.zip_apply(&residual, |a, r| *a += mu * r);

            if !(all_finite(&z_next) && all_finite(&e_next) && all_finite(&y)) {
                let partial = SolveReport {
                    z: DenseMatrix::from_trusted(z),
                    e: DenseMatrix::from_trusted(e),
                    previous,
                    converged: false,
                    iterations: t - 1,
                    objective_trace,
                    residual_trace,
                    solver: self.kind,
                    multiplier: None,
                    column_weights: None,
                };
                return Err(Error::NonFinite {
                    iteration: t,
                    partial: Box::new(partial),
                });
            }
            mu = (opts.rho * mu).min(opts.mu_max);

            let res_inf = max_abs(&residual);
            let done = max_abs_diff(&z, &z_next) < opts.eps_tol
                && max_abs_diff(&e, &e_next) < opts.eps_tol
                && res_inf < opts.eps_tol;

            objective_trace.push(objective_raw(
                spec.variant(),
                spec.lambda(),
                spec.beta(),
                &z_next,
                &e_next,
            ));
            residual_trace.push(res_inf);
            let prev_z = std::mem::replace(&mut z, z_next);
            let prev_e = std::mem::replace(&mut e, e_next);
            previous = Some((
                DenseMatrix::from_trusted(prev_z),
                DenseMatrix::from_trusted(prev_e),
            ));

            if done {
                converged = true;
                break;
            }
        }

        Ok(SolveReport {
            z: DenseMatrix::from_trusted(z),
            e: DenseMatrix::from_trusted(e),
            previous,
            converged,
            iterations: objective_trace.len(),
            objective_trace,
            residual_trace,
            solver: self.kind,
            multiplier: Some(DenseMatrix::from_trusted(y)),
            column_weights: None,
        })
    }
}

fn require_variant(spec: &ProblemSpec, expected: Variant) -> Result<()> {
    if spec.variant() == expected {
        Ok(())
    } else {
        Err(Error::invalid(
            "variant",
            format!(
                "solver expects {expected:?}, instance is {:?}",
                spec.variant()
            ),
        ))
    }
}

/// LADMAP for `min ||Z||_{2,1} + lambda/2 ||E||_F^2  s.t.  X = DZ + E`.
///
/// Starts from `Z = E = Y = 0` and stops once `||Z_t - Z_{t+1}||_inf`,
/// `||E_t - E_{t+1}||_inf` and `||X - DZ - E||_inf` are all below `eps_tol`.
pub fn solve_ladmap(spec: &ProblemSpec, opts: &SolverOptions) -> Result<SolveReport> {
    require_variant(spec, Variant::Plain)?;
    LadmapRun {
        spec,
        penalty: ZPenalty::Group,
        error_penalties: vec![spec.lambda(); spec.samples()],
        kind: SolverKind::Ladmap,
    }
    .run(opts)
}

/// LADMAP for `||Z||_1 + beta ||Z||_{2,1} + lambda/2 ||E||_F^2`; the Z-step
/// uses the sparse-group prox with thresholds `(1, beta) / (mu eta)`.
pub fn solve_sparse_ladmap(spec: &ProblemSpec, opts: &SolverOptions) -> Result<SolveReport> {
    require_variant(spec, Variant::Sparse)?;
    LadmapRun {
        spec,
        penalty: ZPenalty::SparseGroup { beta: spec.beta() },
        error_penalties: vec![spec.lambda(); spec.samples()],
        kind: SolverKind::Sparse,
    }
    .run(opts)
}

/// Column-weighted loss `lambda/2 ||E W||_F^2` with `W = diag(||Z_i||_2)`.
///
/// `W` depends on the unknown `Z`, so it is lagged: round 1 uses `W = I`,
/// each later round uses the previous round's column norms (floored at
/// `weight_floor`). Each round is a cold-started LADMAP solve whose E-step
/// scales column `i` by `mu / (lambda w_i^2 + mu)`. The returned report is
/// the last round's.
pub fn solve_weighted_ladmap(spec: &ProblemSpec, opts: &SolverOptions) -> Result<SolveReport> {
    require_variant(spec, Variant::Weighted)?;
    opts.validate()?;
    let floor = |norms: Vec<f64>| -> Vec<f64> {
        norms
            .into_iter()
            .map(|w| w.max(opts.weight_floor))
            .collect()
    };
    let mut weights = vec![1.0; spec.samples()];
    let mut report = None;
    for _ in 0..opts.weighted_outer_iters {
        let round = LadmapRun {
            spec,
            penalty: ZPenalty::Group,
            error_penalties: weights.iter().map(|w| spec.lambda() * w * w).collect(),
            kind: SolverKind::Weighted,
        }
        .run(opts)?;
        weights = floor(column_norms(&round.z.0));
        report = Some(round);
    }
    let mut report = report.expect("weighted_outer_iters >= 1");
    report.column_weights = Some(weights);
    Ok(report)
}
