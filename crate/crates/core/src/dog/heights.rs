use crate::grid::{CellGrid, GridGeometry, HeightSpan};
use crate::scalar::Scalar;
use crate::scene::{ClassifiedPoint, PointClass};

/// Per-cell extent of this frame's obstacle points, heights taken relative to
/// `ground`.
pub fn rasterize_heights<T: Scalar>(
    points: &[ClassifiedPoint<T>],
    geom: &GridGeometry<T>,
    ground: T,
) -> CellGrid<Option<HeightSpan<T>>> {
    let mut out = CellGrid::filled(geom.width(), geom.height(), None);
    for p in points.iter().filter(|p| p.class == PointClass::Obstacle) {
        let Some(c) = geom.world_to_cell(p.point.xy()) else {
            continue;
        };
        let z = p.point.z - ground;
        let slot: &mut Option<HeightSpan<T>> = out.get_mut(c);
        match slot {
            Some(h) => h.include(z),
            None => *slot = Some(HeightSpan::point(z)),
        }
    }
    out
}

/// Merges this frame's heights into the stored ones. A cell whose occupied
/// mass is below `clear_below` forgets its heights first.
pub fn merge_heights<T: Scalar>(
    prior: Option<HeightSpan<T>>,
    current: Option<HeightSpan<T>>,
    m_occ: T,
    clear_below: T,
) -> Option<HeightSpan<T>> {
    if m_occ < clear_below {
        return None;
    }
    match (prior, current) {
        (Some(a), Some(b)) => Some(a.merge(b)),
        (a, b) => a.or(b),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{Vec2, Vec3};
    use crate::grid::CellIndex;

    fn pt(x: f64, z: f64) -> ClassifiedPoint<f64> {
        ClassifiedPoint {
            beam: 0,
            point: Vec3::new(x, 0.5, z),
            class: PointClass::Obstacle,
            truth: PointClass::Obstacle,
        }
    }

    fn geom() -> GridGeometry<f64> {
        GridGeometry::new(1.0, 4, 1, Vec2::zero(), CellIndex::new(0, 0)).unwrap()
    }

    #[test]
    fn min_and_max_per_cell() {
        let h = rasterize_heights(&[pt(1.2, 0.3), pt(1.7, 1.7), pt(3.1, 0.5)], &geom(), 0.0);
        assert_eq!(*h.get(CellIndex::new(1, 0)), Some(HeightSpan { min: 0.3, max: 1.7 }));
        assert_eq!(*h.get(CellIndex::new(3, 0)), Some(HeightSpan::point(0.5)));
        assert_eq!(*h.get(CellIndex::new(0, 0)), None);
    }

    #[test]
    fn ground_points_do_not_count() {
        let mut g = pt(1.5, 0.0);
        g.class = PointClass::Ground;
        let h = rasterize_heights(&[g], &geom(), 0.0);
        assert!(h.as_slice().iter().all(Option::is_none));
    }

    #[test]
    fn running_max_while_occupied() {
        let a = merge_heights(None, Some(HeightSpan::point(0.3)), 0.9, 0.2);
        let b = merge_heights(a, Some(HeightSpan::point(1.9)), 0.9, 0.2);
        assert_eq!(b, Some(HeightSpan { min: 0.3, max: 1.9 }));
        assert_eq!(merge_heights(b, None, 0.1, 0.2), None);
    }
}
