//! File formats, experiment studies and the command-line front end for
//! [`kcover_core`].

pub mod cli;
pub mod error;
pub mod experiments;
pub mod format;
pub mod manifest;

pub use error::{Error, Result};
