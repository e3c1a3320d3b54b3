//! Brute-force reference implementations of the four feature families.
//!
//! These walk cells first and voxels/frames second, derive cell bounds from
//! `ceil(k * n / cells)` and find histogram bins by linear scan, so they share no code
//! path with the library beyond the public sequence accessors.
#![allow(dead_code)]

use hdgkit_core::{DepthSequence, HdgConfig, SkeletonSequence};

/// `[start, end)` of cell `k` when `n` coordinates split into `cells`.
pub fn cell_bounds(k: usize, n: usize, cells: usize) -> (usize, usize) {
    ((k * n).div_ceil(cells), ((k + 1) * n).div_ceil(cells))
}

/// Largest `b` with `(v - min) * bins >= b * (max - min)`; degenerate ranges give 0.
fn scan_bin(v: f64, min: f64, max: f64, bins: usize) -> usize {
    if max <= min {
        return 0;
    }
    let mut b = 0;
    for cand in 0..bins {
        if (v - min) * bins as f64 >= cand as f64 * (max - min) {
            b = cand;
        }
    }
    b
}

fn foreground(depth: &DepthSequence, t: usize, y: usize, x: usize) -> bool {
    let idx = (t * depth.height() + y) * depth.width() + x;
    depth.get(t, y, x) != 0 && depth.mask().map(|m| m[idx]).unwrap_or(true)
}

fn for_each_cell(depth: &DepthSequence, grid: [usize; 3], mut f: impl FnMut(&[(usize, usize, usize)])) {
    let [nx, ny, nt] = grid;
    for ix in 0..nx {
        for iy in 0..ny {
            for it in 0..nt {
                let (x0, x1) = cell_bounds(ix, depth.width(), nx);
                let (y0, y1) = cell_bounds(iy, depth.height(), ny);
                let (t0, t1) = cell_bounds(it, depth.num_frames(), nt);
                let mut voxels = Vec::new();
                for t in t0..t1 {
                    for y in y0..y1 {
                        for x in x0..x1 {
                            if foreground(depth, t, y, x) {
                                voxels.push((t, y, x));
                            }
                        }
                    }
                }
                f(&voxels);
            }
        }
    }
}

fn all_foreground(depth: &DepthSequence) -> Vec<(usize, usize, usize)> {
    let mut v = Vec::new();
    for t in 0..depth.num_frames() {
        for y in 0..depth.height() {
            for x in 0..depth.width() {
                if foreground(depth, t, y, x) {
                    v.push((t, y, x));
                }
            }
        }
    }
    v
}

pub fn hod_counts(depth: &DepthSequence, cfg: &HdgConfig) -> Vec<u32> {
    let fg = all_foreground(depth);
    let values: Vec<f64> = fg.iter().map(|&(t, y, x)| depth.get(t, y, x) as f64).collect();
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut out = Vec::new();
    for_each_cell(depth, cfg.grid, |voxels| {
        let mut h = vec![0u32; cfg.hod_bins];
        for &(t, y, x) in voxels {
            h[scan_bin(depth.get(t, y, x) as f64, min, max, cfg.hod_bins)] += 1;
        }
        out.extend(h);
    });
    out
}

/// Real-valued derivative: central difference halved, one-sided at the ends.
pub fn derivative(depth: &DepthSequence, t: usize, y: usize, x: usize, axis: usize) -> f64 {
    let sample = |dt: isize, dy: isize, dx: isize| {
        depth.get(
            (t as isize + dt) as usize,
            (y as isize + dy) as usize,
            (x as isize + dx) as usize,
        ) as f64
    };
    let (pos, n) = match axis {
        0 => (x, depth.width()),
        1 => (y, depth.height()),
        _ => (t, depth.num_frames()),
    };
    let step = |s: isize| match axis {
        0 => (0, 0, s),
        1 => (0, s, 0),
        _ => (s, 0, 0),
    };
    if n == 1 {
        0.0
    } else if pos == 0 {
        let (a, b, c) = step(1);
        sample(a, b, c) - sample(0, 0, 0)
    } else if pos == n - 1 {
        let (a, b, c) = step(-1);
        sample(0, 0, 0) - sample(a, b, c)
    } else {
        let (a, b, c) = step(1);
        let (d, e, f) = step(-1);
        (sample(a, b, c) - sample(d, e, f)) / 2.0
    }
}

pub fn hodg_counts(depth: &DepthSequence, cfg: &HdgConfig) -> Vec<u32> {
    let fg = all_foreground(depth);
    let mut ranges = [(f64::INFINITY, f64::NEG_INFINITY); 3];
    for &(t, y, x) in &fg {
        for (axis, r) in ranges.iter_mut().enumerate() {
            let d = derivative(depth, t, y, x, axis);
            r.0 = r.0.min(d);
            r.1 = r.1.max(d);
        }
    }
    let mut out = Vec::new();
    for_each_cell(depth, cfg.grid, |voxels| {
        for axis in 0..3 {
            let bins = cfg.hodg_bins[axis];
            let mut h = vec![0u32; bins];
            for &(t, y, x) in voxels {
                let d = derivative(depth, t, y, x, axis);
                h[scan_bin(d, ranges[axis].0, ranges[axis].1, bins)] += 1;
            }
            out.extend(h);
        }
    });
    out
}

pub fn jpd_counts(skel: &SkeletonSequence, cfg: &HdgConfig) -> Vec<u32> {
    let mut out = Vec::new();
    for axis in 0..3 {
        let mut diffs = Vec::new();
        for t in 0..skel.num_frames() {
            let r = skel.joint(t, skel.reference_joint()).coord(axis);
            for j in 0..skel.num_joints() {
                if j != skel.reference_joint() {
                    diffs.push(skel.joint(t, j).coord(axis) - r);
                }
            }
        }
        let min = diffs.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = diffs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut h = vec![0u32; cfg.jpd_bins];
        for d in diffs {
            let b = if max > min {
                (((d - min) / (max - min) * cfg.jpd_bins as f64).floor() as usize).min(cfg.jpd_bins - 1)
            } else {
                0
            };
            h[b] += 1;
        }
        out.extend(h);
    }
    out
}

pub fn jmv(skel: &SkeletonSequence, cfg: &HdgConfig) -> Vec<f64> {
    let [cx, cy, ct] = cfg.jmv_cells;
    let n = skel.num_frames();
    let mut out = Vec::new();
    for j in 0..skel.num_joints() {
        let xs: Vec<f64> = (0..n).map(|t| skel.joint(t, j).x).collect();
        let ys: Vec<f64> = (0..n).map(|t| skel.joint(t, j).y).collect();
        let (xlo, xhi) = (xs.iter().cloned().fold(f64::INFINITY, f64::min), xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max));
        let (ylo, yhi) = (ys.iter().cloned().fold(f64::INFINITY, f64::min), ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max));
        let spatial = |v: f64, lo: f64, hi: f64, k: usize| {
            if hi > lo {
                (((v - lo) / (hi - lo) * k as f64).floor() as usize).min(k - 1)
            } else {
                0
            }
        };
        for ix in 0..cx {
            for iy in 0..cy {
                for it in 0..ct {
                    let (t0, t1) = cell_bounds(it, n, ct);
                    let frames: Vec<usize> = (t0..t1)
                        .filter(|&t| spatial(xs[t], xlo, xhi, cx) == ix && spatial(ys[t], ylo, yhi, cy) == iy)
                        .collect();
                    if frames.is_empty() {
                        out.extend([0.0; 6]);
                        continue;
                    }
                    let mut lo = [f64::INFINITY; 3];
                    let mut hi = [f64::NEG_INFINITY; 3];
                    for &t in &frames {
                        let p = skel.joint(t, j);
                        for a in 0..3 {
                            lo[a] = lo[a].min(p.coord(a));
                            hi[a] = hi[a].max(p.coord(a));
                        }
                    }
                    let mut rsum = [0.0; 2];
                    for t in t0..t1 {
                        let r = skel.joint(t, skel.reference_joint());
                        rsum[0] += r.x;
                        rsum[1] += r.y;
                    }
                    let cnt = (t1 - t0) as f64;
                    let (rx, ry) = (rsum[0] / cnt, rsum[1] / cnt);
                    out.extend([
                        (hi[0] - lo[0]) * (hi[1] - lo[1]) * (hi[2] - lo[2]),
                        lo[0] - rx,
                        hi[0] - rx,
                        lo[1] - ry,
                        hi[1] - ry,
                        hi[2] - lo[2],
                    ]);
                }
            }
        }
    }
    out
}

/// L1-normalizes consecutive blocks with sizes cycling through `sizes`.
pub fn normalize(counts: &[u32], sizes: &[usize]) -> Vec<f64> {
    let mut out = Vec::new();
    let mut i = 0;
    let mut k = 0;
    while i < counts.len() {
        let len = sizes[k % sizes.len()];
        let total: u32 = counts[i..i + len].iter().sum();
        for &c in &counts[i..i + len] {
            out.push(if total == 0 { 0.0 } else { c as f64 / total as f64 });
        }
        i += len;
        k += 1;
    }
    out
}

/// Binomial coefficient via Pascal's triangle.
pub fn binomial(n: usize, k: usize) -> usize {
    let mut row = vec![1usize];
    for _ in 0..n {
        let mut next = vec![1usize; row.len() + 1];
        for i in 1..row.len() {
            next[i] = row[i - 1] + row[i];
        }
        row = next;
    }
    row.get(k).copied().unwrap_or(0)
}
