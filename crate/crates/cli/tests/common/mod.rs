//! Reference computations for the acceptance suite. None of these call the
//! closed forms they are used to check.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use robrep_core::DenseMatrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normal(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

pub fn uniform(rng: &mut ChaCha8Rng, rows: usize, cols: usize, scale: f64) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.random_range(-scale..scale))
}

pub fn dense(m: DMatrix<f64>) -> DenseMatrix {
    DenseMatrix::new(m).unwrap()
}

fn golden_section(mut f: impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - r * (hi - lo);
    let mut b = lo + r * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    while hi - lo > 1e-12 * (1.0 + lo.abs().max(hi.abs())) {
        if fa <= fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - r * (hi - lo);
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + r * (hi - lo);
            fb = f(b);
        }
    }
    let t = 0.5 * (lo + hi);
    (t, f(t))
}

/// Minimum of a convex function on `R^dim`, searched in the cube of
/// half-width `radius`: a uniform grid (dimension <= 3), then line searches
/// along the coordinate axes, fixed random directions and the ray through the
/// current point, started from both the origin and the best grid point,
/// plus a zooming grid search.
pub fn minimize_convex(f: &dyn Fn(&[f64]) -> f64, dim: usize, radius: f64) -> (Vec<f64>, f64) {
    let origin = vec![0.0; dim];
    let mut starts = vec![(origin.clone(), f(&origin))];
    if dim <= 3 {
        // best grid point away from the origin as well: from the origin
        // itself only a thin cone of directions may descend
        let steps = 20usize;
        let mut best_nonzero: Option<(Vec<f64>, f64)> = None;
        let mut point = vec![0.0; dim];
        for idx in 0..(steps + 1).pow(dim as u32) {
            let mut rem = idx;
            for p in point.iter_mut() {
                *p = -radius + 2.0 * radius * (rem % (steps + 1)) as f64 / steps as f64;
                rem /= steps + 1;
            }
            if point.iter().all(|&p| p == 0.0) {
                continue;
            }
            let v = f(&point);
            if best_nonzero.as_ref().is_none_or(|b| v < b.1) {
                best_nonzero = Some((point.clone(), v));
            }
        }
        starts.extend(best_nonzero);
    } else {
        starts.push((vec![radius / 2.0; dim], f(&vec![radius / 2.0; dim])));
    }
    let mut results: Vec<(Vec<f64>, f64)> = starts
        .into_iter()
        .map(|(p, v)| refine(f, p, v, radius))
        .collect();
    if dim <= 3 {
        let (p, v) = results
            .iter()
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap()
            .clone();
        let (p, v) = zoom(f, p, v, radius);
        results.push(refine(f, p, v, radius));
    }
    results
        .into_iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap()
}

/// Repeated local grids around the incumbent, halving the box each round.
/// Indifferent to kinks, which slow the line searches down near the origin.
fn zoom(
    f: &dyn Fn(&[f64]) -> f64,
    mut best: Vec<f64>,
    mut best_val: f64,
    radius: f64,
) -> (Vec<f64>, f64) {
    let dim = best.len();
    let steps = 10usize;
    let mut half = radius;
    while half > 1e-11 {
        let center = best.clone();
        let mut point = vec![0.0; dim];
        for idx in 0..(steps + 1).pow(dim as u32) {
            let mut rem = idx;
            for (p, c) in point.iter_mut().zip(&center) {
                *p = c - half + 2.0 * half * (rem % (steps + 1)) as f64 / steps as f64;
                rem /= steps + 1;
            }
            let v = f(&point);
            if v < best_val {
                best_val = v;
                best.clone_from(&point);
            }
        }
        half *= 0.5;
    }
    (best, best_val)
}

fn refine(
    f: &dyn Fn(&[f64]) -> f64,
    mut best: Vec<f64>,
    mut best_val: f64,
    radius: f64,
) -> (Vec<f64>, f64) {
    let dim = best.len();
    let mut directions: Vec<Vec<f64>> = (0..dim)
        .map(|j| (0..dim).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let mut r = rng(0x5eed);
    for _ in 0..4 * dim {
        let v: Vec<f64> = (0..dim).map(|_| r.sample(StandardNormal)).collect();
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        directions.push(v.iter().map(|x| x / n).collect());
    }
    for _ in 0..400 {
        let before = best_val;
        let norm = best.iter().map(|v| v * v).sum::<f64>().sqrt();
        let mut dirs = directions.clone();
        if norm > 0.0 {
            dirs.push(best.iter().map(|v| v / norm).collect());
        }
        for dir in &dirs {
            let base = best.clone();
            let along =
                |t: f64| -> Vec<f64> { base.iter().zip(dir).map(|(b, d)| b + t * d).collect() };
            let (t, v) = golden_section(|t| f(&along(t)), -2.0 * radius, 2.0 * radius);
            if v < best_val {
                best_val = v;
                best = along(t);
            }
        }
        if before - best_val <= 1e-15 * (1.0 + best_val.abs()) {
            break;
        }
    }
    (best, best_val)
}

/// `max_i |v_i|`.
pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |a, v| a.max(v.abs()))
}

/// Max-norm violation of `0 in d(||Z||_1 + beta ||Z||_{2,1}) + lambda D^T (DZ - X)`.
///
/// For a zero column the 2-norm distance to the subdifferential is used.
pub fn sparse_stationarity(
    x: &DMatrix<f64>,
    d: &DMatrix<f64>,
    z: &DMatrix<f64>,
    lambda: f64,
    beta: f64,
) -> f64 {
    let neg_grad = d.transpose() * (x - d * z) * lambda;
    let mut worst = 0.0f64;
    for i in 0..z.ncols() {
        let zi = z.column(i);
        let gi = neg_grad.column(i);
        let norm = zi.norm();
        if norm == 0.0 {
            let soft =
                DVector::from_iterator(gi.len(), gi.iter().map(|g| (g.abs() - 1.0).max(0.0)));
            worst = worst.max(soft.norm() - beta);
            continue;
        }
        for j in 0..zi.len() {
            let v = if zi[j] != 0.0 {
                (gi[j] - zi[j].signum() - beta * zi[j] / norm).abs()
            } else {
                gi[j].abs() - 1.0
            };
            worst = worst.max(v);
        }
    }
    worst.max(0.0)
}

/// `||Z diag(u) + lambda D^T D Z - lambda D^T X||_F` and `||lambda D^T X||_F`.
pub fn sylvester_residual(
    d: &DMatrix<f64>,
    u: &[f64],
    x: &DMatrix<f64>,
    z: &DMatrix<f64>,
    lambda: f64,
) -> (f64, f64) {
    let rhs = d.transpose() * x * lambda;
    let u = DMatrix::from_diagonal(&DVector::from_column_slice(u));
    let lhs = z * u + d.transpose() * d * z * lambda;
    ((lhs - &rhs).norm(), rhs.norm())
}

/// `1/2 sum_i u_i ||Z_i||^2 + lambda/2 ||X - DZ||_F^2`.
pub fn quadratic_surrogate(
    x: &DMatrix<f64>,
    d: &DMatrix<f64>,
    z: &DMatrix<f64>,
    u: &[f64],
    lambda: f64,
) -> f64 {
    let penalty: f64 = z
        .column_iter()
        .zip(u)
        .map(|(c, w)| w * c.norm_squared())
        .sum();
    0.5 * penalty + 0.5 * lambda * (x - d * z).norm_squared()
}
