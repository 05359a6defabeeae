use std::io;
use std::path::PathBuf;

use structfac_core::Error as CoreError;

/// Everything the front end can fail with. [`CliError::exit_code`] gives the
/// process status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: io::Error },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cannot write output: {0}")]
    Write(#[from] io::Error),
    #[error("cannot write CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0} reproduction check(s) failed")]
    ReportFailed(usize),
}

impl CliError {
    /// 2 input, 3 resource (including output IO), 4 unsupported case,
    /// 5 failed check.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(CoreError::Input(_))
            | CliError::Input(_)
            | CliError::Read { .. }
            | CliError::Json(_) => 2,
            CliError::Core(CoreError::Resource(_)) | CliError::Write(_) | CliError::Csv(_) => 3,
            CliError::Core(CoreError::Unsupported(_)) => 4,
            CliError::Core(CoreError::Check(_)) | CliError::ReportFailed(_) => 5,
        }
    }
}

macro_rules! input {
    ($($arg:tt)*) => { $crate::error::CliError::Input(format!($($arg)*)) };
}
pub(crate) use input;
