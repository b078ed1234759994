//! Command-line front end for `ctmc-limit`: reads a rate matrix from a JSON
//! or CSV file, runs one analysis and prints a JSON or plain-text report.

pub mod commands;
pub mod document;
pub mod report;

pub use commands::{run, Cli, CliError, Command};
pub use document::{parse_matrix, DocumentError, InputFormat, MatrixDocument};
pub use report::{OutputFormat, Report};
