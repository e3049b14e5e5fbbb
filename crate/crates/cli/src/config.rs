use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use robrep_core::{GenSpec, SolverKind, SolverOptions, Strategy};

use crate::error::CliError;

/// One CLI invocation.
#[derive(Debug, Clone, Parser)]
#[command(name = "robrep", version, about = "Robust l2,1 representation toolkit")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Seed for instance generation.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Directory for artifacts; also the default location of inputs.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Write a synthetic instance: X.csv, D.csv, Z_true.csv, truth.json.
    Generate(GenArgs),
    /// Solve for Z and E: Z.csv, E.csv, report.json.
    Solve(SolveArgs),
    /// Flag corrupted samples from Z: detection.json.
    Detect(DetectArgs),
    /// Run ladmap and irls on one generated instance: bench.json.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    #[arg(long, default_value_t = 40)]
    pub m: usize,
    #[arg(long, default_value_t = 20)]
    pub k: usize,
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    #[arg(long, default_value_t = 0.1)]
    pub corruption_fraction: f64,
    #[arg(long, default_value_t = 10.0)]
    pub corruption_magnitude: f64,
    #[arg(long, default_value_t = 0.01)]
    pub noise_sigma: f64,
    /// Fraction of atoms active in each clean sample.
    #[arg(long, default_value_t = 0.2)]
    pub coeff_sparsity: f64,
    /// Minimum magnitude of active clean coefficients.
    #[arg(long, default_value_t = 1.0)]
    pub coeff_offset: f64,
    /// Fail when corruption cannot be orthogonal to the dictionary range.
    #[arg(long)]
    pub require_orthogonal: bool,
}

impl GenArgs {
    pub fn gen_spec(&self, seed: u64) -> GenSpec {
        GenSpec {
            m: self.m,
            k: self.k,
            n: self.n,
            corruption_fraction: self.corruption_fraction,
            corruption_magnitude: self.corruption_magnitude,
            clean_coeff_sparsity: self.coeff_sparsity,
            coeff_offset: self.coeff_offset,
            noise_sigma: self.noise_sigma,
            seed,
            require_orthogonal: self.require_orthogonal,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[arg(long, default_value = "ladmap")]
    pub solver: SolverKind,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    /// Group weight of the sparse solver; required there, rejected elsewhere.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Defaults to `<out>/X.csv`.
    #[arg(long)]
    pub x: Option<PathBuf>,
    /// Defaults to `<out>/D.csv`.
    #[arg(long)]
    pub d: Option<PathBuf>,
    #[command(flatten)]
    pub overrides: OptionOverrides,
}

/// Per-field overrides on the selected solver's default options.
#[derive(Debug, Clone, Default, Args)]
pub struct OptionOverrides {
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub mu0: Option<f64>,
    #[arg(long)]
    pub mu_max: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    /// Outer reweighting rounds of the weighted solver.
    #[arg(long)]
    pub outer_iters: Option<usize>,
    #[arg(long)]
    pub weight_floor: Option<f64>,
}

impl OptionOverrides {
    pub fn apply(&self, mut opts: SolverOptions) -> SolverOptions {
        if let Some(v) = self.rho {
            opts.rho = v;
        }
        if let Some(v) = self.mu0 {
            opts.mu0 = v;
        }
        if let Some(v) = self.mu_max {
            opts.mu_max = v;
        }
        if let Some(v) = self.eps {
            opts.eps_tol = v;
        }
        if let Some(v) = self.max_iter {
            opts.max_iter = v;
        }
        if let Some(v) = self.outer_iters {
            opts.weighted_outer_iters = v;
        }
        if let Some(v) = self.weight_floor {
            opts.weight_floor = v;
        }
        opts
    }
}

impl SolveArgs {
    /// Validated options and `beta` for this solve.
    pub fn resolve(&self) -> Result<(SolverOptions, f64), CliError> {
        let beta = match (self.solver, self.beta) {
            (SolverKind::Sparse, Some(b)) if b > 0.0 && b.is_finite() => b,
            (SolverKind::Sparse, _) => {
                return Err(CliError::Config("solver sparse requires --beta > 0".into()))
            }
            (kind, Some(_)) => {
                return Err(CliError::Config(format!(
                    "--beta does not apply to solver {}",
                    kind.label()
                )))
            }
            (_, None) => 0.0,
        };
        let opts = self.overrides.apply(SolverOptions::for_solver(self.solver));
        opts.validate()?;
        Ok((opts, beta))
    }

    pub fn x_path(&self, out: &Path) -> PathBuf {
        self.x.clone().unwrap_or_else(|| out.join("X.csv"))
    }

    pub fn d_path(&self, out: &Path) -> PathBuf {
        self.d.clone().unwrap_or_else(|| out.join("D.csv"))
    }
}

#[derive(Debug, Clone, Args)]
pub struct DetectArgs {
    /// Defaults to `<out>/Z.csv`.
    #[arg(long)]
    pub z: Option<PathBuf>,
    /// Ground truth written by `generate`; adds precision and recall.
    #[arg(long)]
    pub truth: Option<PathBuf>,
    /// `gap`, `median:<frac>` or `abs:<tau>`.
    #[arg(long, default_value = "gap")]
    pub strategy: Strategy,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub gen: GenArgs,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
}
