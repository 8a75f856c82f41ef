//! Executable pointfree uniform completion.

pub mod cauchy;
pub mod cli;
pub mod completion;
pub mod frame;
pub mod instances;
pub mod limit;
pub mod presentation;
pub mod uniform;
