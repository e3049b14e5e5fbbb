//! Flag corrupted samples from the column norms of a coefficient matrix.
//!
//! Corrupted samples cannot be represented by the dictionary, so the
//! l2,1 penalty drives their coefficient columns to zero; the score of a
//! sample is the Euclidean norm of its column.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::synthetic::CorruptionGroundTruth;

/// Gaps that differ by less than this are treated as equal.
const GAP_TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Strategy {
    /// Flag scores below a fixed threshold.
    AbsoluteThreshold(f64),
    /// Flag scores below `fraction * median(scores)`.
    RelativeMedian(f64),
    /// Flag everything below the largest gap between consecutive sorted scores.
    #[default]
    LargestGap,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::AbsoluteThreshold(t) => write!(f, "abs:{t}"),
            Strategy::RelativeMedian(frac) => write!(f, "median:{frac}"),
            Strategy::LargestGap => f.write_str("gap"),
        }
    }
}

/// Parses `gap`, `median:<frac>` or `abs:<tau>`.
impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse_num = |v: &str| {
            v.parse::<f64>()
                .map_err(|_| Error::invalid("strategy", format!("bad number in {s:?}")))
        };
        match s.split_once(':') {
            None if s == "gap" => Ok(Strategy::LargestGap),
            Some(("median", v)) => Ok(Strategy::RelativeMedian(parse_num(v)?)),
            Some(("abs", v)) => Ok(Strategy::AbsoluteThreshold(parse_num(v)?)),
            _ => Err(Error::invalid(
                "strategy",
                format!("{s:?} is not gap, median:<frac> or abs:<tau>"),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionResult {
    pub scores: Vec<f64>,
    /// Sorted indices `i` with `scores[i] < threshold_used`.
    pub flagged: Vec<usize>,
    pub threshold_used: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub precision: f64,
    pub recall: f64,
}

/// Euclidean norm of each column.
pub fn score_columns(z: &DenseMatrix) -> Vec<f64> {
    z.column_norms()
}

fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

fn largest_gap_threshold(sorted: &[f64]) -> f64 {
    let gaps: Vec<f64> = sorted.windows(2).map(|w| w[1] - w[0]).collect();
    let max_gap = gaps.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min_gap = gaps.iter().copied().fold(f64::INFINITY, f64::min);
    if max_gap - min_gap <= GAP_TIE_TOL {
        return 0.0;
    }
    let at = gaps.iter().position(|&g| g == max_gap).expect("max exists");
    0.5 * (sorted[at] + sorted[at + 1])
}

pub fn flag_corrupted(scores: &[f64], strategy: Strategy) -> Result<DetectionResult> {
    if scores.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(bad) = scores.iter().find(|&&s| !(s >= 0.0 && s.is_finite())) {
        return Err(Error::invalid(
            "scores",
            format!("{bad} is not a finite nonnegative score"),
        ));
    }
    let mut sorted = scores.to_vec();
    sorted.sort_by(f64::total_cmp);

    let threshold = match strategy {
        Strategy::AbsoluteThreshold(tau) => {
            if !(tau >= 0.0 && tau.is_finite()) {
                return Err(Error::invalid(
                    "threshold",
                    format!("{tau} must be nonnegative"),
                ));
            }
            tau
        }
        Strategy::RelativeMedian(fraction) => {
            if !(fraction > 0.0 && fraction < 1.0) {
                return Err(Error::invalid(
                    "fraction",
                    format!("{fraction} is not in (0, 1)"),
                ));
            }
            fraction * median(&sorted)
        }
        Strategy::LargestGap => {
            if scores.len() < 2 {
                return Err(Error::invalid(
                    "scores",
                    "largest-gap detection needs at least 2",
                ));
            }
            largest_gap_threshold(&sorted)
        }
    };

    let flagged = (0..scores.len())
        .filter(|&i| scores[i] < threshold)
        .collect();
    Ok(DetectionResult {
        scores: scores.to_vec(),
        flagged,
        threshold_used: threshold,
    })
}

/// Precision and recall of the flagged set. An empty flagged set has
/// precision 1; an empty ground truth has recall 1.
pub fn detection_metrics(result: &DetectionResult, truth: &CorruptionGroundTruth) -> Metrics {
    let truth: BTreeSet<usize> = truth.corrupted_indices.iter().copied().collect();
    let hits = result.flagged.iter().filter(|i| truth.contains(i)).count() as f64;
    let precision = if result.flagged.is_empty() {
        1.0
    } else {
        hits / result.flagged.len() as f64
    };
    let recall = if truth.is_empty() {
        1.0
    } else {
        hits / truth.len() as f64
    };
    Metrics { precision, recall }
}
