//! Seeded synthetic instances with column-wise ("sample-specific") corruption.
//!
//! Randomness comes from a single `ChaCha8Rng` seeded with
//! `seed_from_u64(seed)`; normal draws use `rand_distr::StandardNormal`.
//! Draw order is fixed:
//!
//! 1. dictionary entries, column by column (m x k);
//! 2. the corrupted column indices (`rand::seq::index::sample`, then sorted);
//! 3. for each clean column in index order: the support
//!    (`index::sample` of `ceil(clean_coeff_sparsity * k)` atoms), one normal
//!    per support entry, then `m` noise normals;
//! 4. for each corrupted column in index order: `m` normals.
//!
//! Changing this order changes every generated instance.

use nalgebra::{DMatrix, DVector};
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::problem::{ProblemSpec, Variant};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub m: usize,
    pub k: usize,
    pub n: usize,
    /// `floor(corruption_fraction * n)` columns are corrupted.
    pub corruption_fraction: f64,
    /// Corrupted column norm relative to the mean clean column norm.
    pub corruption_magnitude: f64,
    /// Fraction of atoms active in each clean column.
    pub clean_coeff_sparsity: f64,
    /// Active coefficients are `g + sign(g) * coeff_offset` with `g ~ N(0, 1)`,
    /// keeping them at least `coeff_offset` away from zero.
    pub coeff_offset: f64,
    pub noise_sigma: f64,
    pub seed: u64,
    /// Fail instead of falling back when `range(D)` spans the whole space.
    #[serde(default)]
    pub require_orthogonal: bool,
}

impl Default for GenSpec {
    fn default() -> Self {
        Self {
            m: 40,
            k: 20,
            n: 100,
            corruption_fraction: 0.1,
            corruption_magnitude: 10.0,
            clean_coeff_sparsity: 0.2,
            coeff_offset: 1.0,
            noise_sigma: 0.01,
            seed: 0,
            require_orthogonal: false,
        }
    }
}

impl GenSpec {
    pub fn corrupted_count(&self) -> usize {
        (self.corruption_fraction * self.n as f64).floor() as usize
    }

    pub fn active_atoms(&self) -> usize {
        ((self.clean_coeff_sparsity * self.k as f64).ceil() as usize).clamp(1, self.k)
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.k == 0 || self.n == 0 {
            return Err(Error::invalid(
                "dimensions",
                "m, k and n must be at least 1",
            ));
        }
        if !(0.0..1.0).contains(&self.corruption_fraction) {
            return Err(Error::invalid(
                "corruption_fraction",
                format!("{} is not in [0, 1)", self.corruption_fraction),
            ));
        }
        if self.corrupted_count() >= self.n {
            return Err(Error::invalid(
                "corruption_fraction",
                "leaves no clean sample",
            ));
        }
        if !(self.corruption_magnitude > 0.0 && self.corruption_magnitude.is_finite()) {
            return Err(Error::invalid(
                "corruption_magnitude",
                format!("{} must be positive", self.corruption_magnitude),
            ));
        }
        if !(self.clean_coeff_sparsity > 0.0 && self.clean_coeff_sparsity <= 1.0) {
            return Err(Error::invalid(
                "clean_coeff_sparsity",
                format!("{} is not in (0, 1]", self.clean_coeff_sparsity),
            ));
        }
        if !(self.coeff_offset >= 0.0 && self.coeff_offset.is_finite()) {
            return Err(Error::invalid("coeff_offset", "must be nonnegative"));
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return Err(Error::invalid("noise_sigma", "must be nonnegative"));
        }
        Ok(())
    }
}

/// Which columns were corrupted and how.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorruptionGroundTruth {
    /// Sorted, distinct, each `< n`.
    pub corrupted_indices: Vec<usize>,
    pub corruption_magnitude: f64,
    pub seed: u64,
    /// False when corruption could not be made orthogonal to `range(D)`.
    pub orthogonal: bool,
}

#[derive(Debug, Clone)]
pub struct SyntheticInstance {
    pub x: DenseMatrix,
    pub d: DenseMatrix,
    pub z_true: DenseMatrix,
    pub truth: CorruptionGroundTruth,
}

impl SyntheticInstance {
    pub fn problem(&self, variant: Variant, lambda: f64, beta: f64) -> Result<ProblemSpec> {
        ProblemSpec::new(self.x.clone(), self.d.clone(), variant, lambda, beta)
    }
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

fn draw_dictionary(rng: &mut ChaCha8Rng, m: usize, k: usize) -> DMatrix<f64> {
    let mut d = DMatrix::from_fn(m, k, |_, _| 0.0);
    for mut col in d.column_iter_mut() {
        for v in col.iter_mut() {
            *v = normal(rng);
        }
        let norm = col.norm();
        // a zero normal column has probability zero; keep it a unit vector anyway
        if norm > 0.0 {
            col /= norm;
        } else {
            col[0] = 1.0;
        }
    }
    d
}

/// `m x k` dictionary with unit-norm Gaussian columns.
pub fn generate_dictionary(gen: &GenSpec) -> Result<DenseMatrix> {
    gen.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(gen.seed);
    Ok(DenseMatrix::from_trusted(draw_dictionary(
        &mut rng, gen.m, gen.k,
    )))
}

/// Orthonormal basis of `range(D)` (columns of `U` with non-negligible singular values).
fn range_basis(d: &DMatrix<f64>) -> DMatrix<f64> {
    let svd = d.clone().svd(true, false);
    let u = svd.u.expect("requested U");
    let smax = svd.singular_values.max();
    let tol = smax * f64::EPSILON * d.nrows().max(d.ncols()) as f64;
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > tol)
        .collect();
    u.select_columns(&keep)
}

/// Draws `D`, a sparse `Z_true`, clean columns `D z + noise` and corrupted
/// columns orthogonal to `range(D)` (when `m > rank(D)`), scaled to
/// `corruption_magnitude` times the mean clean column norm.
pub fn generate_instance(gen: &GenSpec) -> Result<SyntheticInstance> {
    gen.validate()?;
    let (m, k, n) = (gen.m, gen.k, gen.n);
    let mut rng = ChaCha8Rng::seed_from_u64(gen.seed);
    let d = draw_dictionary(&mut rng, m, k);

    let mut corrupted = index::sample(&mut rng, n, gen.corrupted_count()).into_vec();
    corrupted.sort_unstable();
    let mut is_corrupted = vec![false; n];
    for &i in &corrupted {
        is_corrupted[i] = true;
    }

    let basis = range_basis(&d);
    let rank = basis.ncols();
    let orthogonal = rank < m;
    if !orthogonal && !corrupted.is_empty() && gen.require_orthogonal {
        return Err(Error::InfeasibleOrthogonal { m, rank });
    }

    let active = gen.active_atoms();
    let mut z_true = DMatrix::zeros(k, n);
    let mut x = DMatrix::zeros(m, n);
    let mut clean_norm_sum = 0.0;
    for i in (0..n).filter(|&i| !is_corrupted[i]) {
        let support = index::sample(&mut rng, k, active);
        for atom in support.iter() {
            let g = normal(&mut rng);
            z_true[(atom, i)] = g + g.signum() * gen.coeff_offset;
        }
        let noise = DVector::from_fn(m, |_, _| normal(&mut rng));
        let col = &d * z_true.column(i) + noise * gen.noise_sigma;
        clean_norm_sum += col.norm();
        x.set_column(i, &col);
    }
    let mean_clean = clean_norm_sum / (n - corrupted.len()) as f64;
    let target = gen.corruption_magnitude * mean_clean;

    for &i in &corrupted {
        let mut v = DVector::from_fn(m, |_, _| normal(&mut rng));
        if orthogonal {
            // project twice to clear rounding left by the first pass
            for _ in 0..2 {
                let coeffs = basis.tr_mul(&v);
                v -= &basis * coeffs;
            }
        }
        let norm = v.norm();
        if norm > 0.0 {
            v *= target / norm;
        }
        x.set_column(i, &v);
    }

    Ok(SyntheticInstance {
        x: DenseMatrix::new(x)?,
        d: DenseMatrix::from_trusted(d),
        z_true: DenseMatrix::from_trusted(z_true),
        truth: CorruptionGroundTruth {
            corrupted_indices: corrupted,
            corruption_magnitude: gen.corruption_magnitude,
            seed: gen.seed,
            orthogonal,
        },
    })
}
