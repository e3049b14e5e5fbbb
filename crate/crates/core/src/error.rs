use thiserror::Error;

use crate::solvers::SolveReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix dimensions must be positive, got {rows}x{cols}")]
    EmptyDimension { rows: usize, cols: usize },

    #[error("a {rows}x{cols} matrix needs {expected} entries, got {actual}")]
    EntryCount {
        rows: usize,
        cols: usize,
        expected: usize,
        actual: usize,
    },

    #[error("non-finite entry {value} at ({row}, {col})")]
    NonFiniteEntry { row: usize, col: usize, value: f64 },

    #[error("shape mismatch for {what}: expected {expected:?}, got {actual:?}")]
    ShapeMismatch {
        what: &'static str,
        expected: (usize, usize),
        actual: (usize, usize),
    },

    #[error("matrix is identically zero")]
    ZeroMatrix,

    #[error("invalid {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("linear system for column {column} is numerically singular")]
    SingularSystem { column: usize },

    /// An iterate stopped being finite. `partial` holds the last finite state.
    #[error("{} produced a non-finite iterate at iteration {iteration}", partial.solver.label())]
    NonFinite {
        iteration: usize,
        partial: Box<SolveReport>,
    },

    #[error("input is empty")]
    EmptyInput,

    #[error("cannot build corruption orthogonal to range(D): m={m} but rank(D)={rank}")]
    InfeasibleOrthogonal { m: usize, rank: usize },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// Short machine-readable tag for the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::EmptyDimension { .. } => "empty_dimension",
            Error::EntryCount { .. } => "entry_count",
            Error::NonFiniteEntry { .. } => "non_finite_entry",
            Error::ShapeMismatch { .. } => "shape_mismatch",
            Error::ZeroMatrix => "zero_matrix",
            Error::InvalidParameter { .. } => "invalid_parameter",
            Error::SingularSystem { .. } => "singular_system",
            Error::NonFinite { .. } => "non_finite",
            Error::EmptyInput => "empty_input",
            Error::InfeasibleOrthogonal { .. } => "infeasible_orthogonal",
        }
    }
}

pub(crate) fn check_shape(
    what: &'static str,
    expected: (usize, usize),
    actual: (usize, usize),
) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::ShapeMismatch {
            what,
            expected,
            actual,
        })
    }
}
