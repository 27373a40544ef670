//! File formats, run manifests and the `cimsim` command line on top of `cim-core`.
//!
//! Exit codes are a stable contract: 0 success, 2 input error, 3 refused
//! (problem too large for the requested engine), 4 numerical failure.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod formats;
pub mod manifest;
pub mod optima;
pub mod outputs;

pub use cli::run;
pub use error::{CliError, CliResult};
