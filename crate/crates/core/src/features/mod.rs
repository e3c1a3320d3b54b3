//! The four HDG feature families and their concatenation.
//!
//! `hod` and `hodg` histogram the depth clip per subvolume, `jpd` histograms joint offsets
//! from the reference joint, and `jmv` summarizes the space each joint sweeps per
//! temporal cell. Each family also exposes its raw integer counts (`*_counts`) so the
//! normalized output can be checked against an independent loop.

mod grid;
mod histogram;
mod hod;
mod hodg;
mod jmv;
mod jpd;

use alloc::vec::Vec;

pub use grid::SubvolumeGrid;
pub use histogram::{bin_of_f64, bin_of_int};
pub use hod::{compute_hod, hod_counts, hod_counts_in_range, DepthRange};
pub use hodg::{compute_hodg, derivative_x2, hodg_counts};
pub use jmv::compute_jmv;
pub use jpd::{compute_jpd, jpd_counts};

use crate::error::{Error, Result};
use crate::model::{layout_from_config, ActionSample, Component, FeatureVector, HdgConfig};

/// Extracts the enabled components of `config` from `sample`, in canonical order.
///
/// Depth is only read when `hod` or `hodg` is enabled, the skeleton only for `jpd`/`jmv`.
pub fn extract_hdg(sample: &ActionSample, config: &HdgConfig) -> Result<FeatureVector> {
    config.validate()?;
    for c in config.components.iter() {
        let present = if c.uses_depth() {
            sample.depth.is_some()
        } else {
            sample.skeleton.is_some()
        };
        if !present {
            return Err(Error::MissingModality {
                component: c,
                sample_id: sample.sample_id.clone(),
            });
        }
    }
    let num_joints = sample.skeleton.as_ref().map_or(1, |s| s.num_joints());
    let layout = layout_from_config(config, num_joints)?;
    let mut values = Vec::with_capacity(layout.total_len());
    for c in config.components.iter() {
        let part = match c {
            Component::Hod => compute_hod(sample.depth.as_ref().unwrap(), config),
            Component::Hodg => compute_hodg(sample.depth.as_ref().unwrap(), config),
            Component::Jpd => compute_jpd(sample.skeleton.as_ref().unwrap(), config)?,
            Component::Jmv => compute_jmv(sample.skeleton.as_ref().unwrap(), config),
        };
        debug_assert_eq!(part.len(), config.segment_len(c, num_joints));
        values.extend(part);
    }
    FeatureVector::new(values, layout)
}
