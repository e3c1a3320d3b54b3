use alloc::vec;
use alloc::vec::Vec;

use super::grid::SubvolumeGrid;
use super::histogram::{bin_of_int, normalize_chunks};
use crate::model::{DepthSequence, HdgConfig};

/// Inclusive depth range of a clip's foreground voxels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DepthRange {
    pub min: u16,
    pub max: u16,
}

impl DepthRange {
    pub fn of_foreground(depth: &DepthSequence) -> Option<Self> {
        let mut range: Option<Self> = None;
        for (idx, &d) in depth.frames().iter().enumerate() {
            if !depth.is_foreground_at(idx) {
                continue;
            }
            range = Some(match range {
                None => DepthRange { min: d, max: d },
                Some(r) => DepthRange {
                    min: r.min.min(d),
                    max: r.max.max(d),
                },
            });
        }
        range
    }
}

pub(crate) fn grid_for(depth: &DepthSequence, config: &HdgConfig) -> SubvolumeGrid {
    SubvolumeGrid::new(
        config.grid,
        [depth.width(), depth.height(), depth.num_frames()],
    )
}

/// Raw per-subvolume depth counts, binned over the clip's global foreground range.
pub fn hod_counts(depth: &DepthSequence, config: &HdgConfig) -> Vec<u32> {
    match DepthRange::of_foreground(depth) {
        Some(range) => hod_counts_in_range(depth, config, range),
        None => vec![0; config.num_subvolumes() * config.hod_bins],
    }
}

/// Like [`hod_counts`] with an explicit bin range. Foreground values outside it clamp
/// to the first or last bin.
pub fn hod_counts_in_range(depth: &DepthSequence, config: &HdgConfig, range: DepthRange) -> Vec<u32> {
    let bins = config.hod_bins;
    let grid = grid_for(depth, config);
    let mut counts = vec![0u32; grid.len() * bins];
    let (cx, cy, ct) = (grid.axis_lookup(0), grid.axis_lookup(1), grid.axis_lookup(2));
    let (min, max) = (range.min as i64, range.max as i64);
    for t in 0..depth.num_frames() {
        for y in 0..depth.height() {
            for x in 0..depth.width() {
                let idx = depth.index(t, y, x);
                if !depth.is_foreground_at(idx) {
                    continue;
                }
                let v = (depth.frames()[idx] as i64).clamp(min, max);
                let cell = grid.index(cx[x], cy[y], ct[t]);
                counts[cell * bins + bin_of_int(v, min, max, bins)] += 1;
            }
        }
    }
    counts
}

/// Histogram of depth: per-subvolume L1-normalized depth histograms, concatenated.
pub fn compute_hod(depth: &DepthSequence, config: &HdgConfig) -> Vec<f64> {
    normalize_chunks(&hod_counts(depth, config), &[config.hod_bins])
}
