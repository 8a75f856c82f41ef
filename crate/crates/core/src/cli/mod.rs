//! The `ucomplete` front end: instance files, command dispatch and reports.

mod report;
mod run;
mod spec;

pub use report::{Check, Format, RunReport};
pub use run::{main_with, run, sample_grid, Cli, CliError, Command};
pub use spec::{load_instance, parse_spec, parse_spec_str, InstanceSpec, SpecError};
