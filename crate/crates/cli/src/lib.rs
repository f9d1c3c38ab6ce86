//! Command-line front end for `shg-core`.
//!
//! Structures, groups and actions are read from JSON files; see [`files`] for
//! the formats. [`run_from_args`] is the whole program minus process exit.

pub mod commands;
pub mod files;

pub use commands::{run, run_from_args, Cli, Command, Outcome};
