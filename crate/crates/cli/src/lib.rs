//! File-based harness around `robrep-core`.
//!
//! Matrices travel as headerless CSV, reports as versioned JSON. See
//! [`artifacts`] for the JSON layouts and [`config::RunConfig`] for flags.

pub mod artifacts;
pub mod config;
pub mod csv;
pub mod error;
pub mod run;

pub use config::RunConfig;
pub use csv::{format_matrix_csv, parse_matrix_csv, read_matrix_csv, write_matrix_csv, CsvError};
pub use error::CliError;
pub use run::run_command;
