//! Command-line front end for the `mgonal` engine: argument parsing,
//! report rendering and the on-disk bitset cache.

pub mod app;
pub mod cache;
pub mod output;
pub mod parse;

pub use app::{run, Cli, CliError, Command, RunConfig, EXIT_FALSIFIED, EXIT_PASS, EXIT_USAGE};
pub use parse::{parse_coeffs, parse_range, ParseError};
