use alloc::vec;
use alloc::vec::Vec;

use super::histogram::{bin_of_f64, normalize_chunks};
use crate::error::{Error, Result};
use crate::model::{HdgConfig, SkeletonSequence};

/// Offsets of every non-reference joint from the reference joint, over all frames.
fn offsets(skel: &SkeletonSequence) -> Vec<[f64; 3]> {
    let r = skel.reference_joint();
    let mut out = Vec::with_capacity(skel.num_frames() * (skel.num_joints() - 1));
    for t in 0..skel.num_frames() {
        let frame = skel.frame(t);
        let rj = frame[r];
        for (j, p) in frame.iter().enumerate() {
            if j != r {
                out.push([p.x - rj.x, p.y - rj.y, p.z - rj.z]);
            }
        }
    }
    out
}

/// Raw counts for the x, y and z offset histograms, concatenated.
pub fn jpd_counts(skel: &SkeletonSequence, config: &HdgConfig) -> Result<Vec<u32>> {
    if skel.num_joints() < 2 {
        return Err(Error::InvalidSequence(
            "joint position differences need at least 2 joints".into(),
        ));
    }
    let bins = config.jpd_bins;
    let offs = offsets(skel);
    let mut counts = vec![0u32; 3 * bins];
    for axis in 0..3 {
        let (min, max) = offs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), o| {
            (lo.min(o[axis]), hi.max(o[axis]))
        });
        for o in &offs {
            counts[axis * bins + bin_of_f64(o[axis], min, max, bins)] += 1;
        }
    }
    Ok(counts)
}

/// Joint position difference histograms, one per component, each L1-normalized.
pub fn compute_jpd(skel: &SkeletonSequence, config: &HdgConfig) -> Result<Vec<f64>> {
    Ok(normalize_chunks(&jpd_counts(skel, config)?, &[config.jpd_bins]))
}
