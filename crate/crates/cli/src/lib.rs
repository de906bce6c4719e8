//! File formats and subcommands of the `vcsp` tool.

pub mod commands;
pub mod error;
pub mod formats;

pub use commands::{Options, Outcome};
pub use error::{CliError, Result};
