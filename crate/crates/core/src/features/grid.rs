use alloc::vec::Vec;

/// Even partition of an `(x, y, t)` volume into `nx x ny x nt` cells.
///
/// Coordinate `c` on an axis of extent `n` split into `k` cells lands in cell
/// `floor(c * k / n)`. When `k > n` some cells stay empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubvolumeGrid {
    cells: [usize; 3],
    extent: [usize; 3],
}

impl SubvolumeGrid {
    /// `cells` and `extent` are both ordered (x, y, t).
    pub fn new(cells: [usize; 3], extent: [usize; 3]) -> Self {
        assert!(cells.iter().chain(&extent).all(|&v| v > 0));
        Self { cells, extent }
    }

    pub fn cells(&self) -> [usize; 3] {
        self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn cell_of(&self, axis: usize, coord: usize) -> usize {
        coord * self.cells[axis] / self.extent[axis]
    }

    /// Flat cell index: x-major, then y, then t.
    #[inline]
    pub fn index(&self, ix: usize, iy: usize, it: usize) -> usize {
        (ix * self.cells[1] + iy) * self.cells[2] + it
    }

    /// Cell index of every coordinate along `axis`.
    pub fn axis_lookup(&self, axis: usize) -> Vec<usize> {
        (0..self.extent[axis]).map(|c| self.cell_of(axis, c)).collect()
    }
}
