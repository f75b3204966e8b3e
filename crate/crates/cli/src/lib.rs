//! File formats, the theorem suite and report emission behind the `qg` binary.

pub mod report;
pub mod specfile;
pub mod statefile;
pub mod suite;

use qg_core::error::QgError;
use thiserror::Error;

pub use report::{emit_report, Entry, ReportFormat, Residual, SuiteReport, Verdict};
pub use specfile::{emit_spec, parse_spec_file};
pub use statefile::{emit_state_file, parse_state_file, StateFile};
pub use suite::{run_suite, SuiteInput, SuiteOptions};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("shape error: {0}")]
    Shape(String),

    #[error("duplicate sparse entry: {0}")]
    DuplicateEntry(String),

    #[error("{path}: {message}")]
    Io { path: String, message: String },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Qg(#[from] QgError),
}

/// Failures of an iterative or decomposition routine rather than of the input
/// or of a theorem.
pub fn is_nonconvergence(e: &QgError) -> bool {
    matches!(
        e,
        QgError::MeanErgodicFailure(_)
            | QgError::WedderburnFailure(_)
            | QgError::NonAssociativeProduct(_)
            | QgError::NonStarProduct(_)
            | QgError::OracleDisagreement { .. }
            | QgError::OrientationFailure(_)
    )
}

impl CliError {
    /// 1 for unusable input, 2 for numerical non-convergence.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Qg(e) if is_nonconvergence(e) => 2,
            _ => 1,
        }
    }
}

pub fn read_file(path: &std::path::Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })
}
