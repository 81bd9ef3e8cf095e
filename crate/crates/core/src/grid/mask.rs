use super::CellIndex;

/// Set of cells of a fixed-size grid, stored densely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellMask {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl CellMask {
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            bits: vec![false; width * height],
        }
    }

    pub fn full(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            bits: vec![true; width * height],
        }
    }

    pub fn from_cells(width: usize, height: usize, cells: impl IntoIterator<Item = CellIndex>) -> Self {
        let mut m = Self::new(width, height);
        for c in cells {
            m.insert(c);
        }
        m
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }
    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn contains(&self, c: CellIndex) -> bool {
        c.col < self.width && c.row < self.height && self.bits[c.row * self.width + c.col]
    }

    /// Like [`contains`](Self::contains) for signed coordinates; out of range is `false`.
    #[inline]
    pub fn contains_at(&self, col: i64, row: i64) -> bool {
        col >= 0
            && row >= 0
            && (col as usize) < self.width
            && (row as usize) < self.height
            && self.bits[row as usize * self.width + col as usize]
    }

    #[inline]
    pub fn insert(&mut self, c: CellIndex) {
        self.bits[c.row * self.width + c.col] = true;
    }

    #[inline]
    pub fn remove(&mut self, c: CellIndex) {
        self.bits[c.row * self.width + c.col] = false;
    }

    pub fn len(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|b| *b)
    }

    pub fn iter(&self) -> impl Iterator<Item = CellIndex> + '_ {
        let w = self.width;
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, b)| **b)
            .map(move |(i, _)| CellIndex::new(i % w, i / w))
    }

    pub fn is_subset(&self, other: &CellMask) -> bool {
        self.bits
            .iter()
            .zip(&other.bits)
            .all(|(a, b)| !*a || *b)
    }

    pub fn union_with(&mut self, other: &CellMask) {
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a |= *b;
        }
    }

    pub fn intersect_with(&mut self, other: &CellMask) {
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a &= *b;
        }
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.bits
    }
}
