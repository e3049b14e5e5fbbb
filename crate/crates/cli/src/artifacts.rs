//! JSON artifact schemas. Every file carries `schema_version`.

use robrep_core::{CorruptionGroundTruth, GenSpec, SolverOptions, Variant};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

/// `truth.json`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruthFile {
    pub schema_version: u32,
    #[serde(flatten)]
    pub truth: CorruptionGroundTruth,
    pub gen_spec: GenSpec,
}

/// `report.json`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub schema_version: u32,
    pub solver: String,
    pub variant: Variant,
    pub converged: bool,
    pub iterations: usize,
    pub final_objective: Option<f64>,
    /// `||X - DZ||_F / ||X||_F`, or `||X - DZ||_F` when `X` is zero; null if
    /// not finite.
    pub relative_fit_error: Option<f64>,
    pub lambda: f64,
    pub beta: f64,
    pub options: SolverOptions,
    pub objective_trace: Vec<f64>,
    pub residual_trace: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub column_weights: Option<Vec<f64>>,
    /// Set when the solver stopped on a non-finite iterate; the matrices and
    /// traces are then those of the last finite iterate.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub aborted: Option<Aborted>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aborted {
    pub iteration: usize,
    pub message: String,
}

/// `detection.json`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionFile {
    pub schema_version: u32,
    pub strategy: String,
    pub scores: Vec<f64>,
    pub flagged: Vec<usize>,
    pub threshold: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub precision: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub recall: Option<f64>,
}

/// `bench.json`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchFile {
    pub schema_version: u32,
    pub gen_spec: GenSpec,
    pub lambda: f64,
    pub ladmap: BenchEntry,
    pub irls: BenchEntry,
    /// `|f_ladmap - f_irls| / max(|f_ladmap|, |f_irls|)`, 0 when both vanish.
    pub relative_objective_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchEntry {
    /// Objective with `E = X - DZ`.
    pub objective: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Informational; varies between runs.
    pub wall_time_secs: f64,
}
