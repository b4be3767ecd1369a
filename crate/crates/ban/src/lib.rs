//! Command-line driver for `ban-core`: file formats, run manifests,
//! sequence traces and the family verification matrix.

pub mod cli;
pub mod error;
pub mod formats;
pub mod manifest;
pub mod parallel;
pub mod trace;
pub mod verify;

pub use error::{CliError, ExitStatus, Result};
