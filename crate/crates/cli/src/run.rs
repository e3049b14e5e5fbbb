use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use nalgebra::DMatrix;

use robrep_core::{
    detection_metrics, flag_corrupted, generate_instance, reduced_objective, score_columns,
    solve_irls, solve_ladmap, solve_sparse_ladmap, solve_weighted_ladmap, DenseMatrix, Error,
    ProblemSpec, SolveReport, SolverKind, SolverOptions, Variant,
};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::artifacts::*;
use crate::config::{BenchArgs, Command, DetectArgs, GenArgs, RunConfig, SolveArgs};
use crate::csv::{read_matrix_csv, write_matrix_csv};
use crate::error::CliError;

/// Executes one command and returns the paths it wrote.
pub fn run_command(config: &RunConfig) -> Result<Vec<PathBuf>, CliError> {
    let out = &config.out;
    fs::create_dir_all(out).map_err(|source| CliError::Io {
        path: out.clone(),
        source,
    })?;
    let mut written = Vec::new();
    match &config.command {
        Command::Generate(args) => generate(args, config.seed, out, &mut written)?,
        Command::Solve(args) => solve(args, out, &mut written)?,
        Command::Detect(args) => detect(args, out, &mut written)?,
        Command::Bench(args) => bench(args, config.seed, out, &mut written)?,
    }
    Ok(written)
}

pub fn variant_for(kind: SolverKind) -> Variant {
    match kind {
        SolverKind::Ladmap | SolverKind::Irls => Variant::Plain,
        SolverKind::Weighted => Variant::Weighted,
        SolverKind::Sparse => Variant::Sparse,
    }
}

pub fn dispatch(
    kind: SolverKind,
    spec: &ProblemSpec,
    opts: &SolverOptions,
) -> robrep_core::Result<SolveReport> {
    match kind {
        SolverKind::Ladmap => solve_ladmap(spec, opts),
        SolverKind::Irls => solve_irls(spec, opts),
        SolverKind::Weighted => solve_weighted_ladmap(spec, opts),
        SolverKind::Sparse => solve_sparse_ladmap(spec, opts),
    }
}

fn generate(
    args: &GenArgs,
    seed: u64,
    out: &Path,
    written: &mut Vec<PathBuf>,
) -> Result<(), CliError> {
    let gen = args.gen_spec(seed);
    let inst = generate_instance(&gen)?;
    write_csv(&inst.x, out.join("X.csv"), written)?;
    write_csv(&inst.d, out.join("D.csv"), written)?;
    write_csv(&inst.z_true, out.join("Z_true.csv"), written)?;
    let truth = TruthFile {
        schema_version: SCHEMA_VERSION,
        truth: inst.truth,
        gen_spec: gen,
    };
    write_json(&truth, out.join("truth.json"), written)
}

fn solve(args: &SolveArgs, out: &Path, written: &mut Vec<PathBuf>) -> Result<(), CliError> {
    let (opts, beta) = args.resolve()?;
    let x = read_csv(&args.x_path(out))?;
    let d = read_csv(&args.d_path(out))?;
    let spec = ProblemSpec::new(x, d, variant_for(args.solver), args.lambda, beta)?;

    let (report, aborted) = match dispatch(args.solver, &spec, &opts) {
        Ok(r) => (r, None),
        Err(Error::NonFinite { iteration, partial }) => {
            let message = format!("non-finite iterate at iteration {iteration}");
            (*partial, Some(Aborted { iteration, message }))
        }
        Err(e) => return Err(e.into()),
    };

    write_csv(&report.z, out.join("Z.csv"), written)?;
    write_csv(&report.e, out.join("E.csv"), written)?;
    let file = ReportFile {
        schema_version: SCHEMA_VERSION,
        solver: args.solver.label().to_owned(),
        variant: spec.variant(),
        converged: report.converged,
        iterations: report.iterations,
        final_objective: report.final_objective(),
        relative_fit_error: relative_fit_error(&spec, &report.z),
        lambda: spec.lambda(),
        beta,
        options: opts,
        objective_trace: report.objective_trace,
        residual_trace: report.residual_trace,
        column_weights: report.column_weights,
        aborted: aborted.clone(),
    };
    write_json(&file, out.join("report.json"), written)?;
    match aborted {
        Some(a) => Err(CliError::Aborted {
            solver: args.solver.label(),
            iteration: a.iteration,
        }),
        None => Ok(()),
    }
}

fn relative_fit_error(spec: &ProblemSpec, z: &DenseMatrix) -> Option<f64> {
    let x = spec.x().as_matrix();
    let fit = scaled_frobenius(&(x - spec.d().as_matrix() * z.as_matrix()));
    let scale = scaled_frobenius(x);
    let rel = if scale > 0.0 { fit / scale } else { fit };
    rel.is_finite().then_some(rel)
}

/// Frobenius norm that does not overflow for entries near `f64::MAX`.
fn scaled_frobenius(m: &DMatrix<f64>) -> f64 {
    let s = m.amax();
    if s == 0.0 || !s.is_finite() {
        return s;
    }
    s * (m / s).norm()
}

fn detect(args: &DetectArgs, out: &Path, written: &mut Vec<PathBuf>) -> Result<(), CliError> {
    let z_path = args.z.clone().unwrap_or_else(|| out.join("Z.csv"));
    let z = read_csv(&z_path)?;
    let truth: Option<TruthFile> = args.truth.as_deref().map(read_json).transpose()?;
    if let Some(t) = &truth {
        if let Some(&bad) = t.truth.corrupted_indices.iter().find(|&&i| i >= z.cols()) {
            return Err(CliError::Config(format!(
                "truth index {bad} is out of range for {} samples",
                z.cols()
            )));
        }
    }
    let result = flag_corrupted(&score_columns(&z), args.strategy)?;
    let metrics = truth.map(|t| detection_metrics(&result, &t.truth));
    let file = DetectionFile {
        schema_version: SCHEMA_VERSION,
        strategy: args.strategy.to_string(),
        threshold: result.threshold_used,
        flagged: result.flagged,
        scores: result.scores,
        precision: metrics.map(|m| m.precision),
        recall: metrics.map(|m| m.recall),
    };
    write_json(&file, out.join("detection.json"), written)
}

fn bench(
    args: &BenchArgs,
    seed: u64,
    out: &Path,
    written: &mut Vec<PathBuf>,
) -> Result<(), CliError> {
    let gen = args.gen.gen_spec(seed);
    let inst = generate_instance(&gen)?;
    let spec = inst.problem(Variant::Plain, args.lambda, 0.0)?;
    let run = |kind: SolverKind| -> Result<BenchEntry, CliError> {
        let start = Instant::now();
        let r = dispatch(kind, &spec, &SolverOptions::for_solver(kind))?;
        let wall_time_secs = start.elapsed().as_secs_f64();
        Ok(BenchEntry {
            objective: reduced_objective(&spec, &r.z)?,
            iterations: r.iterations,
            converged: r.converged,
            wall_time_secs,
        })
    };
    let ladmap = run(SolverKind::Ladmap)?;
    let irls = run(SolverKind::Irls)?;
    let scale = ladmap.objective.abs().max(irls.objective.abs());
    let relative_objective_gap = if scale > 0.0 {
        (ladmap.objective - irls.objective).abs() / scale
    } else {
        0.0
    };
    let file = BenchFile {
        schema_version: SCHEMA_VERSION,
        gen_spec: gen,
        lambda: args.lambda,
        ladmap,
        irls,
        relative_objective_gap,
    };
    write_json(&file, out.join("bench.json"), written)
}

fn read_csv(path: &Path) -> Result<DenseMatrix, CliError> {
    read_matrix_csv(path).map_err(|source| CliError::Csv {
        path: path.to_owned(),
        source,
    })
}

fn write_csv(m: &DenseMatrix, path: PathBuf, written: &mut Vec<PathBuf>) -> Result<(), CliError> {
    write_matrix_csv(m, &path).map_err(|source| CliError::Csv {
        path: path.clone(),
        source,
    })?;
    written.push(path);
    Ok(())
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.to_owned(),
        source,
    })
}

fn write_json<T: Serialize>(
    value: &T,
    path: PathBuf,
    written: &mut Vec<PathBuf>,
) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|source| CliError::Json {
        path: path.clone(),
        source,
    })?;
    text.push('\n');
    fs::write(&path, text).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })?;
    written.push(path);
    Ok(())
}
