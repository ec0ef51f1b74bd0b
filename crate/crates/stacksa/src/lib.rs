//! File formats, model archives and the command-line front end over
//! `stacksa-core`.

pub mod archive;
pub mod cli;
pub mod error;
pub mod io;
pub mod parallel;
pub mod presets;
pub mod spec;

pub use error::{Error, Result};
