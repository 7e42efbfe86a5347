//! Std companion to `qsdc-core`: configuration, transcript and CSV output,
//! parallel trial sweeps and the decode-table conformance report.

pub mod config;
pub mod curves;
mod error;
pub mod reference;
pub mod tables;
pub mod transcript_io;
pub mod trials;

pub use error::{CliError, Result, EXIT_ALARM, EXIT_FAULT, EXIT_USAGE};
