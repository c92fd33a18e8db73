//! Monte Carlo drivers, result files and the `borderline` command-line tool.
//!
//! The analysis itself lives in `borderline-core`. This crate adds what needs
//! `std`: parallel trial execution, parameter sweeps, CSV and JSON output, SVG
//! figures and the validation suite.

pub mod cli;
pub mod config;
pub mod error;
pub mod experiment;
pub mod output;
pub mod plot;
pub mod runner;
pub mod validate;

pub use error::{LabError, Result};
