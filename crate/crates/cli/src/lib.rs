//! Command-line front end: grid bundles, flow-line files, SVG plots and the
//! `sclg` subcommands.

pub mod bundle;
pub mod commands;
pub mod error;
pub mod flowfile;
pub mod gridarg;
pub mod svg;

pub use error::{CliError, CliResult};
