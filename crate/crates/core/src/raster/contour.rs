use std::collections::VecDeque;

use crate::grid::{CellIndex, CellMask};

/// Moore neighborhood in clockwise order starting west (rows grow northward).
const RING: [(i64, i64); 8] = [
    (-1, 0),
    (-1, 1),
    (0, 1),
    (1, 1),
    (1, 0),
    (1, -1),
    (0, -1),
    (-1, -1),
];

fn ring_index(dc: i64, dr: i64) -> usize {
    RING.iter()
        .position(|&d| d == (dc, dr))
        .expect("backtrack cell must be a Moore neighbor")
}

/// Traces the outer boundary of the 8-connected component of `mask` that
/// contains `start` using Moore-neighbor tracing with Jacob's stopping
/// criterion. Cells outside the grid count as background.
///
/// `start` must be the first cell of its component in row-major scan order
/// (lowest row, then lowest column), which guarantees its west neighbor is
/// background. Returns the boundary cells in visiting order; cells on thin
/// spurs may appear more than once.
pub fn trace_outer_boundary(mask: &CellMask, start: CellIndex) -> Vec<CellIndex> {
    debug_assert!(mask.contains(start));
    let fg = |c: i64, r: i64| mask.contains_at(c, r);
    let s = (start.col as i64, start.row as i64);
    let initial_back = (s.0 - 1, s.1);

    let mut contour = vec![start];
    let mut p = s;
    let mut back = initial_back;
    let limit = 8 * mask.width() * mask.height() + 16;

    for _ in 0..limit {
        let bi = ring_index(back.0 - p.0, back.1 - p.1);
        let mut prev = back;
        let mut next = None;
        for k in 1..=8 {
            let d = RING[(bi + k) % 8];
            let q = (p.0 + d.0, p.1 + d.1);
            if fg(q.0, q.1) {
                next = Some((q, prev));
                break;
            }
            prev = q;
        }
        let Some((q, b)) = next else {
            // isolated cell
            return contour;
        };
        p = q;
        back = b;
        if p == s && back == initial_back {
            break;
        }
        contour.push(CellIndex::new(p.0 as usize, p.1 as usize));
    }
    contour
}

/// Cells enclosed by `boundary` (boundary included): everything that cannot
/// be reached 4-connectedly from outside the grid without crossing it.
pub fn fill_enclosed(boundary: &CellMask) -> CellMask {
    let (w, h) = (boundary.width(), boundary.height());
    let mut outside = CellMask::new(w, h);
    let mut queue = VecDeque::new();
    let seed = |c: CellIndex, outside: &mut CellMask, queue: &mut VecDeque<CellIndex>| {
        if !boundary.contains(c) && !outside.contains(c) {
            outside.insert(c);
            queue.push_back(c);
        }
    };
    for col in 0..w {
        seed(CellIndex::new(col, 0), &mut outside, &mut queue);
        seed(CellIndex::new(col, h - 1), &mut outside, &mut queue);
    }
    for row in 0..h {
        seed(CellIndex::new(0, row), &mut outside, &mut queue);
        seed(CellIndex::new(w - 1, row), &mut outside, &mut queue);
    }
    while let Some(c) = queue.pop_front() {
        let (col, row) = (c.col as i64, c.row as i64);
        for (dc, dr) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
            let (nc, nr) = (col + dc, row + dr);
            if nc >= 0 && nr >= 0 && (nc as usize) < w && (nr as usize) < h {
                seed(CellIndex::new(nc as usize, nr as usize), &mut outside, &mut queue);
            }
        }
    }
    let mut inside = CellMask::full(w, h);
    for c in outside.iter() {
        inside.remove(c);
    }
    inside
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mask_from(rows: &[&str]) -> CellMask {
        // rows given top (north) first
        let h = rows.len();
        let w = rows[0].len();
        let mut m = CellMask::new(w, h);
        for (i, line) in rows.iter().enumerate() {
            let row = h - 1 - i;
            for (col, ch) in line.chars().enumerate() {
                if ch == '#' {
                    m.insert(CellIndex::new(col, row));
                }
            }
        }
        m
    }

    fn first(m: &CellMask) -> CellIndex {
        m.iter().next().unwrap()
    }

    #[test]
    fn single_cell() {
        let m = mask_from(&["...", ".#.", "..."]);
        assert_eq!(trace_outer_boundary(&m, first(&m)), vec![CellIndex::new(1, 1)]);
    }

    #[test]
    fn square_ring_boundary_skips_interior() {
        let m = mask_from(&[".....", ".###.", ".###.", ".###.", "....."]);
        let b = trace_outer_boundary(&m, first(&m));
        let set = CellMask::from_cells(5, 5, b.iter().copied());
        assert_eq!(set.len(), 8);
        assert!(!set.contains(CellIndex::new(2, 2)));
        let filled = fill_enclosed(&set);
        assert_eq!(filled, m);
    }

    #[test]
    fn hole_is_filled_through_traced_boundary() {
        let m = mask_from(&["#####", "#...#", "#...#", "#####"]);
        let b = trace_outer_boundary(&m, first(&m));
        let set = CellMask::from_cells(5, 4, b.iter().copied());
        assert_eq!(set, m);
        assert_eq!(fill_enclosed(&set).len(), 20);
    }

    #[test]
    fn spur_is_walked_both_ways() {
        let m = mask_from(&["#....", "##...", "#####"]);
        let b = trace_outer_boundary(&m, first(&m));
        let set = CellMask::from_cells(5, 3, b.iter().copied());
        assert_eq!(set, m);
    }

    #[test]
    fn diagonal_boundary_blocks_four_connected_fill() {
        let m = mask_from(&["..#", ".#.", "#.."]);
        let filled = fill_enclosed(&m);
        assert_eq!(filled, m);
    }
}
