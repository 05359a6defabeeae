//! File formats, state catalog and command-line front end for
//! [`structfac_core`].

pub mod angle;
pub mod cli;
pub mod error;
pub mod formats;
pub mod report;
pub mod source;

pub use error::CliError;
pub use structfac_core;
