//! Job files, command dispatch and report/CSV/JSON output for `hsmult`.

pub mod error;
pub mod job;
pub mod output;
pub mod runner;

pub use error::CliError;
pub use job::{JobFile, JobOptions};
pub use runner::{run, Command, Outcome, Overrides, Table};
