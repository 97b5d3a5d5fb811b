//! Command-line front end for `coherence-forge-core`: JSON matrix I/O, one
//! subcommand per computation, job files, and the ℓ1-versus-robustness
//! scatter experiment.
//!
//! Exit codes are shared by every command: 0 optimal, 1 parse or validation
//! error, 2 numerical failure, 3 infeasible.

pub mod args;
pub mod commands;
pub mod error;
pub mod format;
pub mod job;
pub mod scatter;

pub use error::CliError;
pub use format::MatrixJson;
pub use job::JobSpec;
