//! Grid geometry, per-cell storage and neighbor iteration.
//!
//! Cells are addressed as `(col, row)` from the southwest corner of the grid,
//! with columns growing along world +x and rows along world +y. The grid is
//! axis-aligned with the world frame and follows the ego vehicle by whole-cell
//! shifts.

mod cell;
mod labels;
mod mask;
mod pose;

pub use cell::{CellState, HeightSpan, Masses};
pub use labels::{
    parse_slot, slot_str, DisplayLabel, Dynamics, FovLabel, LabelError, LabelState, Occlusion,
    Occupancy, Reliability, Sensing, UnknownToken, NONE_TOKEN,
};
pub use mask::CellMask;
pub use pose::EgoPose;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::Vec2;
use crate::scalar::{lit, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CellIndex {
    pub col: usize,
    pub row: usize,
}

impl CellIndex {
    #[inline]
    pub const fn new(col: usize, row: usize) -> Self {
        Self { col, row }
    }

    /// Chebyshev distance between two cells.
    pub fn chebyshev(self, other: CellIndex) -> usize {
        self.col.abs_diff(other.col).max(self.row.abs_diff(other.row))
    }
}

impl std::fmt::Display for CellIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.col, self.row)
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("cell size must be positive and finite, got {0}")]
    CellSize(f64),
    #[error("grid must be at least 1x1, got {width}x{height}")]
    Empty { width: usize, height: usize },
    #[error("ego anchor {anchor} lies outside a {width}x{height} grid")]
    Anchor {
        anchor: CellIndex,
        width: usize,
        height: usize,
    },
}

/// Placement and resolution of the grid in the world.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct GridGeometry<T: Scalar = f64> {
    cell_size: T,
    width: usize,
    height: usize,
    origin: Vec2<T>,
    ego_anchor: CellIndex,
}

const OFFSETS8: [(isize, isize); 8] = [
    (-1, -1),
    (0, -1),
    (1, -1),
    (-1, 0),
    (1, 0),
    (-1, 1),
    (0, 1),
    (1, 1),
];

impl<T: Scalar> GridGeometry<T> {
    pub fn new(
        cell_size: T,
        width: usize,
        height: usize,
        origin: Vec2<T>,
        ego_anchor: CellIndex,
    ) -> Result<Self, GeometryError> {
        if !(cell_size > T::zero()) || !cell_size.is_finite() {
            return Err(GeometryError::CellSize(cell_size.as_f64()));
        }
        if width == 0 || height == 0 {
            return Err(GeometryError::Empty { width, height });
        }
        if ego_anchor.col >= width || ego_anchor.row >= height {
            return Err(GeometryError::Anchor {
                anchor: ego_anchor,
                width,
                height,
            });
        }
        Ok(Self {
            cell_size,
            width,
            height,
            origin,
            ego_anchor,
        })
    }

    #[inline]
    pub fn cell_size(&self) -> T {
        self.cell_size
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
    pub fn origin(&self) -> Vec2<T> {
        self.origin
    }
    #[inline]
    pub fn ego_anchor(&self) -> CellIndex {
        self.ego_anchor
    }
    #[inline]
    pub fn len(&self) -> usize {
        self.width * self.height
    }
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Same shape, re-anchored so that `ego` falls inside the anchor cell.
    ///
    /// The origin stays on the world-aligned lattice of spacing `cell_size`,
    /// so consecutive recenterings differ by whole cells.
    pub fn centered_on(&self, ego: Vec2<T>) -> Self {
        let cs = self.cell_size;
        let ox = (ego.x / cs).floor() - T::from_count(self.ego_anchor.col);
        let oy = (ego.y / cs).floor() - T::from_count(self.ego_anchor.row);
        Self {
            origin: Vec2::new(ox * cs, oy * cs),
            ..*self
        }
    }

    /// Whole-cell offset `(dcol, drow)` such that cell `c` of `self` is cell
    /// `c - offset` of `other`. `None` if the lattices are not aligned.
    pub fn offset_to(&self, other: &Self) -> Option<(i64, i64)> {
        let dx = (other.origin.x - self.origin.x) / self.cell_size;
        let dy = (other.origin.y - self.origin.y) / self.cell_size;
        let rx = dx.round();
        let ry = dy.round();
        let tol = lit::<T>(1e-6);
        if (dx - rx).abs() > tol || (dy - ry).abs() > tol {
            return None;
        }
        Some((rx.to_i64()?, ry.to_i64()?))
    }

    pub fn contains(&self, col: i64, row: i64) -> bool {
        col >= 0 && row >= 0 && (col as usize) < self.width && (row as usize) < self.height
    }

    /// Cell containing `p`, or `None` when `p` is outside the grid.
    pub fn world_to_cell(&self, p: Vec2<T>) -> Option<CellIndex> {
        let (fx, fy) = self.world_to_grid(p);
        if !fx.is_finite() || !fy.is_finite() {
            return None;
        }
        let col = fx.floor().to_i64()?;
        let row = fy.floor().to_i64()?;
        self.contains(col, row)
            .then(|| CellIndex::new(col as usize, row as usize))
    }

    /// Continuous grid coordinates (units of cells, origin at the SW corner).
    #[inline]
    pub fn world_to_grid(&self, p: Vec2<T>) -> (T, T) {
        (
            (p.x - self.origin.x) / self.cell_size,
            (p.y - self.origin.y) / self.cell_size,
        )
    }

    #[inline]
    pub fn grid_to_world(&self, gx: T, gy: T) -> Vec2<T> {
        Vec2::new(
            self.origin.x + gx * self.cell_size,
            self.origin.y + gy * self.cell_size,
        )
    }

    pub fn cell_center(&self, c: CellIndex) -> Vec2<T> {
        let half = lit::<T>(0.5);
        self.grid_to_world(T::from_count(c.col) + half, T::from_count(c.row) + half)
    }

    pub fn cell_corner(&self, c: CellIndex) -> Vec2<T> {
        self.grid_to_world(T::from_count(c.col), T::from_count(c.row))
    }

    #[inline]
    pub fn linear(&self, c: CellIndex) -> usize {
        c.row * self.width + c.col
    }

    #[inline]
    pub fn from_linear(&self, i: usize) -> CellIndex {
        CellIndex::new(i % self.width, i / self.width)
    }

    /// In-grid 8-connected neighbors of `c`.
    pub fn neighbors8(&self, c: CellIndex) -> impl Iterator<Item = CellIndex> + '_ {
        OFFSETS8.iter().filter_map(move |&(dc, dr)| {
            let col = c.col as i64 + dc as i64;
            let row = c.row as i64 + dr as i64;
            self.contains(col, row)
                .then(|| CellIndex::new(col as usize, row as usize))
        })
    }

    /// All cells in row-major order starting at the southwest corner.
    pub fn cells(&self) -> impl Iterator<Item = CellIndex> {
        let w = self.width;
        (0..self.len()).map(move |i| CellIndex::new(i % w, i / w))
    }

    pub fn cast<U: Scalar>(&self) -> GridGeometry<U> {
        GridGeometry {
            cell_size: U::lit(self.cell_size.as_f64()),
            width: self.width,
            height: self.height,
            origin: self.origin.cast(),
            ego_anchor: self.ego_anchor,
        }
    }
}

/// Dense row-major storage of one value per cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellGrid<C> {
    width: usize,
    height: usize,
    data: Vec<C>,
}

impl<C: Clone> CellGrid<C> {
    pub fn filled(width: usize, height: usize, value: C) -> Self {
        Self {
            width,
            height,
            data: vec![value; width * height],
        }
    }

    /// Re-indexes into a grid of the same shape shifted by `(dcol, drow)`
    /// cells; cells with no source are set to `fill`.
    pub fn shifted(&self, dcol: i64, drow: i64, fill: C) -> Self {
        let mut out = Self::filled(self.width, self.height, fill);
        for row in 0..self.height {
            let src_row = row as i64 + drow;
            if src_row < 0 || src_row >= self.height as i64 {
                continue;
            }
            for col in 0..self.width {
                let src_col = col as i64 + dcol;
                if src_col < 0 || src_col >= self.width as i64 {
                    continue;
                }
                let src = src_row as usize * self.width + src_col as usize;
                out.data[row * self.width + col] = self.data[src].clone();
            }
        }
        out
    }
}

impl<C> CellGrid<C> {
    pub fn from_vec(width: usize, height: usize, data: Vec<C>) -> Self {
        assert_eq!(data.len(), width * height, "cell grid size mismatch");
        Self {
            width,
            height,
            data,
        }
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
    pub fn get(&self, c: CellIndex) -> &C {
        &self.data[c.row * self.width + c.col]
    }
    #[inline]
    pub fn get_mut(&mut self, c: CellIndex) -> &mut C {
        &mut self.data[c.row * self.width + c.col]
    }
    pub fn as_slice(&self) -> &[C] {
        &self.data
    }
    pub fn as_mut_slice(&mut self) -> &mut [C] {
        &mut self.data
    }

    pub fn iter(&self) -> impl Iterator<Item = (CellIndex, &C)> {
        let w = self.width;
        self.data
            .iter()
            .enumerate()
            .map(move |(i, v)| (CellIndex::new(i % w, i / w), v))
    }
}
