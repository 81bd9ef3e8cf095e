use crate::geom::Vec2;
use crate::grid::{CellIndex, GridGeometry};
use crate::scalar::Scalar;

/// One cell crossed by a ray, with the entry/exit distances along the ray
/// (same units as the world frame).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellCrossing<T: Scalar = f64> {
    pub cell: CellIndex,
    pub enter: T,
    pub exit: T,
}

impl<T: Scalar> CellCrossing<T> {
    pub fn midpoint(&self) -> T {
        (self.enter + self.exit) * T::lit(0.5)
    }
}

/// Every in-grid cell crossed by the horizontal ray `origin + t·dir`,
/// `t ∈ [0, length]`, in order of increasing `t` (Amanatides–Woo traversal).
///
/// `dir` must be a unit vector.
pub fn traverse<T: Scalar>(
    geom: &GridGeometry<T>,
    origin: Vec2<T>,
    dir: Vec2<T>,
    length: T,
) -> Vec<CellCrossing<T>> {
    let cs = geom.cell_size();
    let w = T::from_count(geom.width());
    let h = T::from_count(geom.height());
    let (gx, gy) = geom.world_to_grid(origin);
    let (dx, dy) = (dir.x / cs, dir.y / cs);

    // clip [0, length] against the grid rectangle (Liang–Barsky)
    let mut t0 = T::zero();
    let mut t1 = length;
    for (p, d, hi) in [(gx, dx, w), (gy, dy, h)] {
        if d == T::zero() {
            if p < T::zero() || p >= hi {
                return Vec::new();
            }
        } else {
            let a = (T::zero() - p) / d;
            let b = (hi - p) / d;
            let (lo_t, hi_t) = if a < b { (a, b) } else { (b, a) };
            t0 = t0.max(lo_t);
            t1 = t1.min(hi_t);
        }
    }
    if !(t0 < t1) {
        return Vec::new();
    }

    let px = gx + dx * t0;
    let py = gy + dy * t0;
    let clamp_idx = |v: T, n: usize| -> i64 {
        let i = v.floor().to_i64().unwrap_or(0);
        i.clamp(0, n as i64 - 1)
    };
    let mut col = clamp_idx(px, geom.width());
    let mut row = clamp_idx(py, geom.height());

    let step_x: i64 = if dx > T::zero() { 1 } else { -1 };
    let step_y: i64 = if dy > T::zero() { 1 } else { -1 };
    let next_boundary = |idx: i64, step: i64| T::lit((if step > 0 { idx + 1 } else { idx }) as f64);
    let inf = T::infinity();
    let mut t_max_x = if dx == T::zero() {
        inf
    } else {
        (next_boundary(col, step_x) - gx) / dx
    };
    let mut t_max_y = if dy == T::zero() {
        inf
    } else {
        (next_boundary(row, step_y) - gy) / dy
    };
    let t_delta_x = if dx == T::zero() { inf } else { (T::one() / dx).abs() };
    let t_delta_y = if dy == T::zero() { inf } else { (T::one() / dy).abs() };

    let mut out = Vec::new();
    let mut t_enter = t0;
    loop {
        let t_exit = t_max_x.min(t_max_y).min(t1);
        if t_exit > t_enter || out.is_empty() {
            out.push(CellCrossing {
                cell: CellIndex::new(col as usize, row as usize),
                enter: t_enter,
                exit: t_exit,
            });
        }
        if t_exit >= t1 {
            break;
        }
        if t_max_x < t_max_y {
            col += step_x;
            t_enter = t_max_x;
            t_max_x += t_delta_x;
        } else {
            row += step_y;
            t_enter = t_max_y;
            t_max_y += t_delta_y;
        }
        if !geom.contains(col, row) {
            break;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geom() -> GridGeometry {
        GridGeometry::new(1.0, 10, 10, Vec2::zero(), CellIndex::new(0, 0)).unwrap()
    }

    #[test]
    fn horizontal_ray() {
        let cells = traverse(&geom(), Vec2::new(0.5, 0.5), Vec2::new(1.0, 0.0), 3.0);
        let idx: Vec<_> = cells.iter().map(|c| c.cell.col).collect();
        assert_eq!(idx, vec![0, 1, 2, 3]);
        assert!((cells[0].exit - 0.5).abs() < 1e-12);
        assert!((cells[3].exit - 3.0).abs() < 1e-12);
    }

    #[test]
    fn clipped_to_grid() {
        let cells = traverse(&geom(), Vec2::new(-2.5, 0.5), Vec2::new(1.0, 0.0), 100.0);
        assert_eq!(cells.len(), 10);
        assert!((cells[0].enter - 2.5).abs() < 1e-12);
        assert!((cells[9].exit - 12.5).abs() < 1e-12);
    }

    #[test]
    fn intervals_tile_the_segment() {
        let d = Vec2::new(0.8_f64, 0.6);
        let cells = traverse(&geom(), Vec2::new(0.2, 0.3), d, 9.0);
        for w in cells.windows(2) {
            assert!((w[0].exit - w[1].enter).abs() < 1e-12);
            assert_eq!(w[0].cell.chebyshev(w[1].cell), 1);
        }
        for c in &cells {
            let p = Vec2::new(0.2, 0.3) + d.scale(c.midpoint());
            assert_eq!(geom().world_to_cell(p), Some(c.cell));
        }
    }
}
