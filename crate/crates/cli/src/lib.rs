//! Library side of the `hscfr` command line: run resolution, the bench
//! runner and CSV output. The binary in `main.rs` is a thin clap front end.

pub mod bench;
pub mod csv;
pub mod error;
pub mod run;

pub use error::{CliError, Result};
