use alloc::vec;
use alloc::vec::Vec;

use super::grid::SubvolumeGrid;
use super::histogram::bin_of_f64;
use crate::model::{HdgConfig, SkeletonSequence};

/// Values stored per joint per cell.
pub const JMV_VALUES_PER_CELL: usize = 6;

#[derive(Clone, Copy)]
struct Extent {
    lo: [f64; 3],
    hi: [f64; 3],
}

impl Extent {
    fn of(p: [f64; 3]) -> Self {
        Self { lo: p, hi: p }
    }

    fn grow(&mut self, p: [f64; 3]) {
        for a in 0..3 {
            self.lo[a] = self.lo[a].min(p[a]);
            self.hi[a] = self.hi[a].max(p[a]);
        }
    }
}

/// Joint movement volumes.
///
/// For each joint and each `(x, y, t)` cell: the occupied bounding volume, the x and y
/// extremes relative to the reference joint's mean position over the cell's frames,
/// and the depth extent. Frames split evenly into `t` cells; the `x`/`y` cells split the
/// joint's own whole-clip range. Empty cells are all zero.
pub fn compute_jmv(skel: &SkeletonSequence, config: &HdgConfig) -> Vec<f64> {
    let [cx, cy, ct] = config.jmv_cells;
    let cells = cx * cy * ct;
    let t_len = skel.num_frames();
    let r = skel.reference_joint();
    let mut out = vec![0.0; skel.num_joints() * cells * JMV_VALUES_PER_CELL];

    // reference mean per temporal cell
    let t_grid = SubvolumeGrid::new([1, 1, ct], [1, 1, t_len]);
    let mut ref_sum = vec![[0.0f64; 3]; ct];
    let mut ref_n = vec![0usize; ct];
    for t in 0..t_len {
        let it = t_grid.cell_of(2, t);
        let p = skel.joint(t, r);
        for a in 0..3 {
            ref_sum[it][a] += p.coord(a);
        }
        ref_n[it] += 1;
    }

    let grid = SubvolumeGrid::new(config.jmv_cells, [1, 1, 1]);
    let mut cell_extent: Vec<Option<Extent>> = vec![None; cells];
    for j in 0..skel.num_joints() {
        let pos = |t: usize| {
            let p = skel.joint(t, j);
            [p.x, p.y, p.z]
        };
        let mut whole = Extent::of(pos(0));
        for t in 1..t_len {
            whole.grow(pos(t));
        }
        cell_extent.iter_mut().for_each(|c| *c = None);
        for t in 0..t_len {
            let p = pos(t);
            let ix = bin_of_f64(p[0], whole.lo[0], whole.hi[0], cx);
            let iy = bin_of_f64(p[1], whole.lo[1], whole.hi[1], cy);
            let cell = grid.index(ix, iy, t_grid.cell_of(2, t));
            match &mut cell_extent[cell] {
                Some(e) => e.grow(p),
                slot => *slot = Some(Extent::of(p)),
            }
        }
        for ix in 0..cx {
            for iy in 0..cy {
                for it in 0..ct {
                    let cell = grid.index(ix, iy, it);
                    let Some(e) = cell_extent[cell] else { continue };
                    let n = ref_n[it] as f64;
                    let (rx, ry) = (ref_sum[it][0] / n, ref_sum[it][1] / n);
                    let d = [e.hi[0] - e.lo[0], e.hi[1] - e.lo[1], e.hi[2] - e.lo[2]];
                    let base = (j * cells + cell) * JMV_VALUES_PER_CELL;
                    out[base..base + JMV_VALUES_PER_CELL].copy_from_slice(&[
                        d[0] * d[1] * d[2],
                        e.lo[0] - rx,
                        e.hi[0] - rx,
                        e.lo[1] - ry,
                        e.hi[1] - ry,
                        d[2],
                    ]);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Joint;

    #[test]
    fn stationary_joint_has_zero_volume_and_depth_range() {
        let joints = (0..10)
            .flat_map(|_| [Joint::new(0.0, 0.0, 3.0, 1.0), Joint::new(0.5, 1.0, 2.5, 1.0)])
            .collect();
        let skel = SkeletonSequence::new(10, 2, 0, joints).unwrap();
        let v = compute_jmv(&skel, &HdgConfig::default());
        assert_eq!(v.len(), 2 * 30);
        for cell in v[30..].chunks(6) {
            assert_eq!(cell, [0.0, 0.5, 0.5, 1.0, 1.0, 0.0]);
        }
    }

    #[test]
    fn short_clip_leaves_empty_cells_zero() {
        let joints = (0..3)
            .map(|t| Joint::new(t as f64, 2.0 * t as f64, 0.5 * t as f64, 1.0))
            .collect();
        let skel = SkeletonSequence::new(3, 1, 0, joints).unwrap();
        let v = compute_jmv(&skel, &HdgConfig::default());
        // frames 0, 1, 2 land in cells 0, 1, 3 of 5
        assert!(v[12..18].iter().all(|&x| x == 0.0));
        assert!(v[24..30].iter().all(|&x| x == 0.0));
        assert_eq!(&v[0..6], [0.0; 6]);
    }

    #[test]
    fn twenty_joints_default_length() {
        let skel = SkeletonSequence::new(8, 20, 1, vec![Joint::default(); 160]).unwrap();
        assert_eq!(compute_jmv(&skel, &HdgConfig::default()).len(), 600);
    }

    #[test]
    fn volume_over_a_moving_cell() {
        // two frames in one cell: joint moves by (1, 2, 3), reference fixed at origin
        let joints = vec![
            Joint::default(),
            Joint::new(0.0, 0.0, 0.0, 1.0),
            Joint::default(),
            Joint::new(1.0, 2.0, 3.0, 1.0),
        ];
        let skel = SkeletonSequence::new(2, 2, 0, joints).unwrap();
        let cfg = HdgConfig {
            jmv_cells: [1, 1, 1],
            ..HdgConfig::default()
        };
        let v = compute_jmv(&skel, &cfg);
        assert_eq!(&v[6..12], [6.0, 0.0, 1.0, 0.0, 2.0, 3.0]);
    }
}
