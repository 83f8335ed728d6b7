//! CLI errors and their exit codes.

use std::path::PathBuf;

use sepstruct_core::Error as CoreError;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const MISMATCH: i32 = 1;
    pub const PARSE: i32 = 2;
    pub const VALIDATION: i32 = 3;
    pub const UNDECIDED: i32 = 4;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("bad flag: {0}")]
    BadFlag(String),
    #[error("invalid state: {0}")]
    Validation(CoreError),
    #[error("{0}")]
    Core(CoreError),
}

impl CliError {
    /// Input, output-path and flag problems exit 2, states or arguments the
    /// operation rejects exit 3 and undecided oracles exit 4.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Read { .. } | CliError::Write { .. } | CliError::Parse(_) | CliError::BadFlag(_) => {
                exit::PARSE
            }
            CliError::Validation(_) => exit::VALIDATION,
            CliError::Core(CoreError::OracleUndecided { .. }) => exit::UNDECIDED,
            CliError::Core(_) => exit::VALIDATION,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}
