//! Headerless comma-separated matrices, one row per line.
//!
//! Values are written in the shortest decimal form that parses back to the
//! same `f64`, switching to exponent notation for magnitudes outside
//! `[1e-5, 1e16)`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use robrep_core::DenseMatrix;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CsvError {
    /// `line` and `col` are 1-based; `col` counts fields, not characters.
    #[error("line {line}, field {col}: cannot parse {token:?} as a finite number")]
    Parse {
        line: usize,
        col: usize,
        token: String,
    },

    #[error("line {line} has {found} fields, expected {expected}")]
    RaggedRows {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("file contains no rows")]
    EmptyFile,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CsvError {
    pub fn kind(&self) -> &'static str {
        match self {
            CsvError::Parse { .. } => "csv_parse",
            CsvError::RaggedRows { .. } => "csv_ragged_rows",
            CsvError::EmptyFile => "csv_empty_file",
            CsvError::Io(_) => "io",
        }
    }
}

pub fn read_matrix_csv(path: impl AsRef<Path>) -> Result<DenseMatrix, CsvError> {
    parse_matrix_csv(&fs::read_to_string(path)?)
}

/// Parses CSV text. Trailing blank lines are ignored; a blank line between
/// rows is a ragged row.
pub fn parse_matrix_csv(text: &str) -> Result<DenseMatrix, CsvError> {
    let mut lines: Vec<&str> = text.lines().collect();
    while lines.last().is_some_and(|l| l.trim().is_empty()) {
        lines.pop();
    }
    if lines.is_empty() {
        return Err(CsvError::EmptyFile);
    }

    let mut cols = None;
    let mut data = Vec::new();
    for (idx, line) in lines.iter().enumerate() {
        let line_no = idx + 1;
        let fields: Vec<&str> = if line.trim().is_empty() {
            Vec::new()
        } else {
            line.split(',').collect()
        };
        let expected = *cols.get_or_insert(fields.len());
        if fields.len() != expected {
            return Err(CsvError::RaggedRows {
                line: line_no,
                expected,
                found: fields.len(),
            });
        }
        for (c, token) in fields.iter().enumerate() {
            let token = token.trim();
            match token.parse::<f64>() {
                Ok(v) if v.is_finite() => data.push(v),
                _ => {
                    return Err(CsvError::Parse {
                        line: line_no,
                        col: c + 1,
                        token: token.to_owned(),
                    })
                }
            }
        }
    }
    let cols = cols.unwrap_or(0);
    if cols == 0 {
        return Err(CsvError::RaggedRows {
            line: 1,
            expected: 1,
            found: 0,
        });
    }
    // every entry is finite and the count matches, so construction cannot fail
    Ok(DenseMatrix::from_row_slice(lines.len(), cols, &data).expect("validated csv"))
}

pub fn write_matrix_csv(m: &DenseMatrix, path: impl AsRef<Path>) -> Result<(), CsvError> {
    fs::write(path, format_matrix_csv(m))?;
    Ok(())
}

pub fn format_matrix_csv(m: &DenseMatrix) -> String {
    let mut out = String::new();
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            if c > 0 {
                out.push(',');
            }
            push_value(&mut out, m[(r, c)]);
        }
        out.push('\n');
    }
    out
}

fn push_value(out: &mut String, v: f64) {
    let a = v.abs();
    if a != 0.0 && !(1e-5..1e16).contains(&a) {
        write!(out, "{v:e}").unwrap();
    } else {
        write!(out, "{v}").unwrap();
    }
}
