//! File formats, reports, model persistence and the `hdgkit` command line on top of
//! [`hdgkit_core`].
//!
//! - [`depb`]: binary depth clips,
//! - [`skeleton`]: skeleton text files,
//! - [`manifest`] and [`dataset`]: dataset layout on disk,
//! - [`report`]: CSV outputs,
//! - [`model`]: trained pipeline persistence,
//! - [`config`] and [`cli`]: run configuration and commands.

pub mod cli;
pub mod config;
pub mod dataset;
pub mod depb;
pub mod error;
pub mod manifest;
pub mod model;
pub mod report;
pub mod skeleton;

pub use error::{Error, Result};
