//! Library side of the `hiding` command-line tool: file formats, experiment
//! commands and the invariant verification battery.

pub mod commands;
pub mod error;
pub mod files;
pub mod verify;

pub use error::{CliError, Result};
