//! Closed-form proximal maps used by the solver steps.
//!
//! Each operator is applied per column (group shrinkage) or per entry (soft
//! threshold), so results do not depend on evaluation order.

use nalgebra::DMatrix;

use crate::matrix::DenseMatrix;

/// Group shrinkage of each column: `argmin_A eps*||A||_{2,1} + 1/2 ||A - M||_F^2`.
///
/// Column `m_i` becomes `(1 - eps/||m_i||) m_i` when `||m_i|| > eps` and zero
/// otherwise (a column whose norm equals `eps` maps to zero).
///
/// # Panics
/// If `eps` is negative or NaN.
pub fn prox_l21_columns(m: &DenseMatrix, eps: f64) -> DenseMatrix {
    let mut out = m.0.clone();
    shrink_columns(&mut out, eps);
    DenseMatrix::from_trusted(out)
}

/// Entry-wise `sign(m) * max(|m| - tau, 0)`.
///
/// # Panics
/// If `tau` is negative or NaN.
pub fn soft_threshold(m: &DenseMatrix, tau: f64) -> DenseMatrix {
    let mut out = m.0.clone();
    soft_threshold_entries(&mut out, tau);
    DenseMatrix::from_trusted(out)
}

/// Proximal map of `tau*||A||_1 + eps*||A||_{2,1}`: soft threshold, then group
/// shrinkage.
///
/// # Panics
/// If either threshold is negative or NaN.
pub fn prox_sparse_group(m: &DenseMatrix, tau: f64, eps: f64) -> DenseMatrix {
    let mut out = m.0.clone();
    sparse_group_shrink(&mut out, tau, eps);
    DenseMatrix::from_trusted(out)
}

pub(crate) fn shrink_columns(m: &mut DMatrix<f64>, eps: f64) {
    assert!(
        eps >= 0.0,
        "shrinkage threshold must be nonnegative, got {eps}"
    );
    if eps == 0.0 {
        return;
    }
    for mut col in m.column_iter_mut() {
        let norm = col.norm();
        if !norm.is_finite() {
            // leave overflowed columns for the caller's finiteness check
            continue;
        }
        if norm > eps {
            col *= 1.0 - eps / norm;
        } else {
            col.fill(0.0);
        }
    }
}

pub(crate) fn soft_threshold_entries(m: &mut DMatrix<f64>, tau: f64) {
    assert!(tau >= 0.0, "soft threshold must be nonnegative, got {tau}");
    if tau == 0.0 {
        return;
    }
    m.apply(|v| *v = v.signum() * (v.abs() - tau).max(0.0));
}

pub(crate) fn sparse_group_shrink(m: &mut DMatrix<f64>, tau: f64, eps: f64) {
    soft_threshold_entries(m, tau);
    shrink_columns(m, eps);
}
