//! Histogram-of-depth-gradients (HDG) action recognition without the standard library.
//!
//! The crate covers the whole algorithmic side of the pipeline:
//!
//! - [`model`]: depth/skeleton sequences, feature layouts and configuration,
//! - [`features`]: the four histogram families (`hod`, `hodg`, `jpd`, `jmv`),
//! - [`forest`]: random decision forests, predictor importance and threshold pruning,
//! - [`eval`]: confusion matrices, split enumeration and the evaluation protocols,
//! - [`synth`]: a deterministic synthetic dataset generator.
//!
//! Everything here only needs `alloc`. File formats, the CLI and all other IO live in the
//! `hdgkit` crate. Enable the `parallel` feature to spread tree training and protocol
//! plans over a rayon pool; results are identical with or without it.
#![no_std]
// `!(x >= 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;
#[cfg(feature = "parallel")]
extern crate std;

pub mod dataset;
pub mod error;
pub mod eval;
pub mod features;
pub mod forest;
pub mod model;
mod par;
pub mod synth;

pub use dataset::{DatasetManifest, ManifestEntry};
pub use error::{Error, Result};
pub use model::{
    layout_from_config, ActionSample, Component, ComponentSet, DepthSequence, FeatureLayout,
    FeatureVector, HdgConfig, HyperParams, Joint, Segment, SkeletonSequence,
};
