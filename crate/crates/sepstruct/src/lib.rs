//! Command-line companion of `sepstruct-core`: state and report JSON, sweep
//! CSV, atomic writes and the reproduction harness.

pub mod cli;
pub mod error;
pub mod output;
pub mod report;
pub mod reproduce;
pub mod state_io;
pub mod sweep;

pub use cli::run;
pub use error::{exit, CliError};
