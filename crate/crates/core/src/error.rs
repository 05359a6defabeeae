use alloc::string::String;

/// Failure classes surfaced by the library.
///
/// The variants map one-to-one onto the CLI exit codes, so keep the set small.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Caller supplied a value outside an operation's domain.
    #[error("invalid input: {0}")]
    Input(String),
    /// The request would exceed a dense-matrix or state-size cap.
    #[error("resource limit: {0}")]
    Resource(String),
    /// No closed form or implementation exists for this combination.
    #[error("unsupported case: {0}")]
    Unsupported(String),
    /// An internal numerical consistency check did not hold.
    #[error("check failed: {0}")]
    Check(String),
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! input_err {
    ($($arg:tt)*) => { $crate::error::Error::Input(alloc::format!($($arg)*)) };
}
macro_rules! resource_err {
    ($($arg:tt)*) => { $crate::error::Error::Resource(alloc::format!($($arg)*)) };
}
pub(crate) use input_err;
pub(crate) use resource_err;
