use crate::scalar::{lit, Scalar};

/// Bresenham rasterization of the segment `start → end`, given in continuous
/// grid coordinates (cell `(c, r)` spans `[c, c+1) × [r, r+1)`).
///
/// Steps one cell at a time along the major axis and, at each cell center of
/// that axis, picks the cell containing the segment. With both endpoints on
/// cell centers this reduces to the classic integer algorithm. The output is
/// 8-connected and every emitted cell is crossed by the segment.
pub fn bresenham<T: Scalar>(start: (T, T), end: (T, T)) -> Vec<(i64, i64)> {
    let (x0, y0) = start;
    let (x1, y1) = end;
    let dx = x1 - x0;
    let dy = y1 - y0;
    let half = lit::<T>(0.5);

    let x_major = dx.abs() >= dy.abs();
    let (a0, a1, b0, da, db) = if x_major {
        (x0, x1, y0, dx, dy)
    } else {
        (y0, y1, x0, dy, dx)
    };

    let c0 = a0.floor().to_i64().unwrap_or(0);
    let c1 = a1.floor().to_i64().unwrap_or(0);
    let step: i64 = if c1 >= c0 { 1 } else { -1 };
    let (lo, hi) = if a0 <= a1 { (a0, a1) } else { (a1, a0) };
    let n = (c1 - c0).unsigned_abs() as usize + 1;

    let mut out = Vec::with_capacity(n);
    let mut c = c0;
    for _ in 0..n {
        let center = (T::lit(c as f64) + half).max(lo).min(hi);
        let b = if da == T::zero() {
            b0
        } else {
            b0 + (center - a0) * db / da
        };
        let bc = b.floor().to_i64().unwrap_or(0);
        out.push(if x_major { (c, bc) } else { (bc, c) });
        c += step;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn classic(x0: i64, y0: i64, x1: i64, y1: i64) -> Vec<(i64, i64)> {
        // textbook integer Bresenham, used as an independent check
        let dx = (x1 - x0).abs();
        let dy = -(y1 - y0).abs();
        let sx = if x0 < x1 { 1 } else { -1 };
        let sy = if y0 < y1 { 1 } else { -1 };
        let mut err = dx + dy;
        let (mut x, mut y) = (x0, y0);
        let mut out = vec![(x, y)];
        while (x, y) != (x1, y1) {
            let e2 = 2 * err;
            if e2 >= dy {
                err += dy;
                x += sx;
            }
            if e2 <= dx {
                err += dx;
                y += sy;
            }
            out.push((x, y));
        }
        out
    }

    fn centers(x0: i64, y0: i64, x1: i64, y1: i64) -> Vec<(i64, i64)> {
        bresenham(
            (x0 as f64 + 0.5, y0 as f64 + 0.5),
            (x1 as f64 + 0.5, y1 as f64 + 0.5),
        )
    }

    #[test]
    fn axis_and_diagonal_lines() {
        assert_eq!(centers(0, 0, 3, 0), vec![(0, 0), (1, 0), (2, 0), (3, 0)]);
        assert_eq!(centers(0, 0, 0, -2), vec![(0, 0), (0, -1), (0, -2)]);
        assert_eq!(centers(0, 0, 3, 3), vec![(0, 0), (1, 1), (2, 2), (3, 3)]);
        assert_eq!(centers(2, 2, 2, 2), vec![(2, 2)]);
    }

    #[test]
    fn matches_classic_when_no_ties() {
        // odd minor deltas avoid exact half-cell ties where tie-breaking differs
        for &(x1, y1) in &[(7, 3), (9, -5), (-11, 3), (5, 11), (-3, -7), (13, 1)] {
            assert_eq!(centers(0, 0, x1, y1), classic(0, 0, x1, y1), "to ({x1},{y1})");
        }
    }

    #[test]
    fn cells_are_eight_connected_and_crossed() {
        let s = (0.3_f64, 0.9);
        let e = (17.2_f64, 6.4);
        let cells = bresenham(s, e);
        for w in cells.windows(2) {
            assert!((w[0].0 - w[1].0).abs() <= 1 && (w[0].1 - w[1].1).abs() <= 1);
        }
        for &(c, r) in &cells {
            // the segment passes through the cell at the column center
            let x = (c as f64 + 0.5).clamp(s.0, e.0);
            let y = s.1 + (x - s.0) * (e.1 - s.1) / (e.0 - s.0);
            assert_eq!(y.floor() as i64, r);
        }
        assert_eq!(cells.first(), Some(&(0, 0)));
        assert_eq!(cells.last(), Some(&(17, 6)));
    }
}
