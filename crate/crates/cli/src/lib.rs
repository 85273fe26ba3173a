//! File formats, scenario reports and the command-line front end for
//! `qretro-core`.
//!
//! JSON conventions: a complex scalar is `[re, im]`, a matrix is a list of
//! rows. Floats are written in shortest round-trip form, so re-reading an
//! emitted file reproduces every value exactly.

pub mod cli;
pub mod curves;
pub mod error;
pub mod json;
pub mod report;

pub use error::{CliError, ExitCode};
