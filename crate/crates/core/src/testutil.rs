//! Test-only numeric oracles, independent of the closed forms they check.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::matrix::DenseMatrix;

pub(crate) fn random_matrix(rows: usize, cols: usize, seed: u64, scale: f64) -> DenseMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DenseMatrix::from_fn(rows, cols, |_, _| rng.random_range(-scale..scale)).unwrap()
}

pub(crate) fn random_normal(rows: usize, cols: usize, seed: u64) -> DenseMatrix {
    use rand_distr::StandardNormal;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DenseMatrix::from_fn(rows, cols, |_, _| rng.sample::<f64, _>(StandardNormal)).unwrap()
}

fn golden_section(mut f: impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - inv_phi * (hi - lo);
    let mut b = lo + inv_phi * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    while hi - lo > 1e-13 * (1.0 + lo.abs().max(hi.abs())) {
        if fa <= fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - inv_phi * (hi - lo);
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + inv_phi * (hi - lo);
            fb = f(b);
        }
    }
    0.5 * (lo + hi)
}

/// Minimizes a convex function by a coarse grid (dimension <= 3) followed by
/// golden-section coordinate descent. The origin is always a candidate, since
/// the penalties used here are non-smooth there. Returns `(argmin, min)`.
pub(crate) fn minimize_convex(f: impl Fn(&[f64]) -> f64, center: &[f64]) -> (Vec<f64>, f64) {
    let dim = center.len();
    let radius = center.iter().fold(0.0f64, |a, v| a.max(v.abs())) + 1.0;
    let mut best = center.to_vec();
    let mut best_val = f(&best);
    if dim <= 3 {
        let steps = 24usize;
        let total = (steps + 1).pow(dim as u32);
        let mut point = vec![0.0; dim];
        for idx in 0..total {
            let mut rem = idx;
            for p in point.iter_mut() {
                *p = -radius + 2.0 * radius * (rem % (steps + 1)) as f64 / steps as f64;
                rem /= steps + 1;
            }
            let val = f(&point);
            if val < best_val {
                best_val = val;
                best.clone_from(&point);
            }
        }
    }
    for _ in 0..500 {
        let before = best_val;
        for j in 0..dim {
            let mut trial = best.clone();
            let t = golden_section(
                |t| {
                    trial[j] = t;
                    f(&trial)
                },
                -radius,
                radius,
            );
            trial[j] = t;
            let val = f(&trial);
            if val <= best_val {
                best_val = val;
                best = trial;
            }
        }
        if before - best_val <= 1e-16 {
            break;
        }
    }
    let zero = vec![0.0; dim];
    let zero_val = f(&zero);
    if zero_val < best_val {
        (zero, zero_val)
    } else {
        (best, best_val)
    }
}
