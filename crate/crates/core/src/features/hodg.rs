use alloc::vec;
use alloc::vec::Vec;

use super::histogram::{bin_of_int, normalize_chunks};
use super::hod::grid_for;
use crate::model::{DepthSequence, HdgConfig};

/// Twice the finite-difference depth derivative at `(t, y, x)` along `axis` (0 = x,
/// 1 = y, 2 = t).
///
/// Interior points use the central difference `d[i+1] - d[i-1]`; the ends use the
/// doubled one-sided difference. An axis of extent 1 has derivative 0. Keeping the
/// factor of two makes every value an integer, so binning is exact.
#[inline]
pub fn derivative_x2(depth: &DepthSequence, t: usize, y: usize, x: usize, axis: usize) -> i64 {
    let (pos, extent) = match axis {
        0 => (x, depth.width()),
        1 => (y, depth.height()),
        _ => (t, depth.num_frames()),
    };
    if extent < 2 {
        return 0;
    }
    let at = |p: usize| -> i64 {
        match axis {
            0 => depth.get(t, y, p) as i64,
            1 => depth.get(t, p, x) as i64,
            _ => depth.get(p, y, x) as i64,
        }
    };
    if pos == 0 {
        2 * (at(1) - at(0))
    } else if pos == extent - 1 {
        2 * (at(pos) - at(pos - 1))
    } else {
        at(pos + 1) - at(pos - 1)
    }
}

/// Raw derivative counts: per subvolume, the x-channel bins, then y, then t.
///
/// Derivatives are taken on the stored depth values; only foreground voxels are
/// histogrammed and only they define each channel's global range.
pub fn hodg_counts(depth: &DepthSequence, config: &HdgConfig) -> Vec<u32> {
    let grid = grid_for(depth, config);
    let per_cell = config.hodg_bins_total();
    let mut counts = vec![0u32; grid.len() * per_cell];

    let mut fg = Vec::new();
    let mut derivs: Vec<[i64; 3]> = Vec::new();
    for t in 0..depth.num_frames() {
        for y in 0..depth.height() {
            for x in 0..depth.width() {
                if depth.is_foreground_at(depth.index(t, y, x)) {
                    fg.push((t, y, x));
                    derivs.push([0, 1, 2].map(|axis| derivative_x2(depth, t, y, x, axis)));
                }
            }
        }
    }
    if fg.is_empty() {
        return counts;
    }

    let mut ranges = [(i64::MAX, i64::MIN); 3];
    for d in &derivs {
        for (r, &v) in ranges.iter_mut().zip(d) {
            r.0 = r.0.min(v);
            r.1 = r.1.max(v);
        }
    }
    let offsets = [0, config.hodg_bins[0], config.hodg_bins[0] + config.hodg_bins[1]];
    let (cx, cy, ct) = (grid.axis_lookup(0), grid.axis_lookup(1), grid.axis_lookup(2));
    for (&(t, y, x), d) in fg.iter().zip(&derivs) {
        let base = grid.index(cx[x], cy[y], ct[t]) * per_cell;
        for ch in 0..3 {
            let b = bin_of_int(d[ch], ranges[ch].0, ranges[ch].1, config.hodg_bins[ch]);
            counts[base + offsets[ch] + b] += 1;
        }
    }
    counts
}

/// Histogram of depth derivatives, each channel histogram L1-normalized.
pub fn compute_hodg(depth: &DepthSequence, config: &HdgConfig) -> Vec<f64> {
    normalize_chunks(&hodg_counts(depth, config), &config.hodg_bins)
}
