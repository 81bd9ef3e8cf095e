use super::{Cluster, Thresholds};
use crate::geom::{wrap_angle, Vec2};
use crate::grid::{CellGrid, CellIndex, CellMask, GridGeometry, Occlusion, Occupancy, Reliability};
use crate::raster::{bresenham, fill_enclosed, trace_outer_boundary};
use crate::scalar::{lit, Scalar};

/// Cells hidden from the sensor by one cluster.
#[derive(Debug, Clone, PartialEq)]
pub struct OcclusionRegion {
    pub cluster: usize,
    pub cells: CellMask,
    pub kind: Occlusion,
}

/// Members with at least one 8-neighbor outside the cluster (or the grid).
pub fn border_cells(members: &CellMask) -> Vec<CellIndex> {
    members
        .iter()
        .filter(|c| {
            let (col, row) = (c.col as i64, c.row as i64);
            (-1..=1).any(|dc| {
                (-1..=1).any(|dr| (dc, dr) != (0, 0) && !members.contains_at(col + dc, row + dr))
            })
        })
        .collect()
}

/// Exit parameter of `p + t·d` from the box `[0, w] × [0, h]`, for `p` inside.
fn exit_param<T: Scalar>(p: (T, T), d: (T, T), w: T, h: T) -> T {
    let mut t = T::infinity();
    for (pos, dir, hi) in [(p.0, d.0, w), (p.1, d.1, h)] {
        if dir > T::zero() {
            t = t.min((hi - pos) / dir);
        } else if dir < T::zero() {
            t = t.min(-pos / dir);
        }
    }
    t
}

/// Shadow cast by `members` as seen from `sensor` (world frame).
///
/// Every corner of every border cell is projected away from the sensor to
/// the grid edge and rasterized with Bresenham's algorithm. The union of
/// these rasters, the members and the grid-edge cells inside the cluster's
/// angular span is outlined with Moore-neighbor tracing. The enclosed cells,
/// minus the members and minus cells whose center lies outside the open
/// angular span, form the region. Empty when the sensor sits inside the
/// cluster; never contains the sensor cell.
pub fn occlusion_region<T: Scalar>(
    members: &[CellIndex],
    sensor: Vec2<T>,
    geom: &GridGeometry<T>,
) -> CellMask {
    let (w, h) = (geom.width(), geom.height());
    let member_mask = CellMask::from_cells(w, h, members.iter().copied());
    let empty = CellMask::new(w, h);
    let sensor_cell = geom.world_to_cell(sensor);
    if members.is_empty() || sensor_cell.is_some_and(|c| member_mask.contains(c)) {
        return empty;
    }

    let (sx, sy) = geom.world_to_grid(sensor);
    let (wf, hf) = (T::from_count(w), T::from_count(h));
    let eps = lit::<T>(1e-6);
    let mut union = member_mask.clone();

    for b in border_cells(&member_mask) {
        for (dc, dr) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
            let cx = T::from_count(b.col + dc);
            let cy = T::from_count(b.row + dr);
            let (dx, dy) = (cx - sx, cy - sy);
            let len = (dx * dx + dy * dy).sqrt();
            if len <= eps {
                continue;
            }
            let d = (dx / len, dy / len);
            let start = (cx + d.0 * eps, cy + d.1 * eps);
            if start.0 < T::zero() || start.1 < T::zero() || start.0 >= wf || start.1 >= hf {
                continue;
            }
            let t = exit_param(start, d, wf, hf) - eps;
            if t <= T::zero() {
                continue;
            }
            let end = (start.0 + d.0 * t, start.1 + d.1 * t);
            for (c, r) in bresenham(start, end) {
                if geom.contains(c, r) {
                    union.insert(CellIndex::new(c as usize, r as usize));
                }
            }
        }
    }

    // grid-edge cells between the extreme rays close the outline
    let centroid = members
        .iter()
        .fold(Vec2::zero(), |a, &c| a + geom.cell_center(c))
        .scale(T::one() / T::from_count(members.len()));
    let base = (centroid - sensor).angle();
    let cs = geom.cell_size();
    let (mut lo, mut hi) = (T::infinity(), T::neg_infinity());
    for &m in members {
        let corner = geom.cell_corner(m);
        for (dx, dy) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
            let p = corner + Vec2::new(T::from_count(dx) * cs, T::from_count(dy) * cs);
            let a = wrap_angle((p - sensor).angle() - base);
            lo = lo.min(a);
            hi = hi.max(a);
        }
    }
    if hi - lo < T::PI() {
        let perimeter = (0..w)
            .flat_map(|c| [CellIndex::new(c, 0), CellIndex::new(c, h - 1)])
            .chain((0..h).flat_map(|r| [CellIndex::new(0, r), CellIndex::new(w - 1, r)]));
        for c in perimeter {
            let a = wrap_angle((geom.cell_center(c) - sensor).angle() - base);
            if a >= lo && a <= hi {
                union.insert(c);
            }
        }
    }

    // outline every connected piece of the union and fill it
    let mut region = CellMask::new(w, h);
    for c in geom.cells() {
        if union.contains(c) && !region.contains(c) {
            let contour = trace_outer_boundary(&union, c);
            let outline = CellMask::from_cells(w, h, contour);
            region.union_with(&fill_enclosed(&outline));
        }
    }
    for &m in members {
        region.remove(m);
    }
    let tie = lit::<T>(1e-9);
    // raster cells along the extreme rays whose center falls outside the
    // angular span are only grazed by the shadow
    let trim: Vec<CellIndex> = region
        .iter()
        .filter(|&c| {
            let a = wrap_angle((geom.cell_center(c) - sensor).angle() - base);
            a <= lo + tie || a >= hi - tie
        })
        .collect();
    for c in trim {
        region.remove(c);
    }
    if let Some(s) = sensor_cell {
        region.remove(s);
    }
    region
}

/// Occlusion kind attributed to a cluster's shadow.
pub fn occlusion_kind<T: Scalar>(cluster: &Cluster<T>, th: &Thresholds<T>) -> Occlusion {
    if cluster.reliability != Some(Reliability::Reliable) {
        Occlusion::Unreliable
    } else if cluster.speed < th.t_v_static {
        Occlusion::Static
    } else {
        Occlusion::Dynamic
    }
}

/// Occlusion slot of every unknown cell; `None` for the other cells. Cells
/// covered by several regions take the highest priority kind
/// (static, then dynamic, then unreliable).
pub fn label_occlusions(
    regions: &[OcclusionRegion],
    occ: &CellGrid<Occupancy>,
) -> CellGrid<Option<Occlusion>> {
    let mut out = CellGrid::filled(occ.width(), occ.height(), None);
    for (i, o) in occ.as_slice().iter().enumerate() {
        if *o == Occupancy::Unknown {
            out.as_mut_slice()[i] = Some(Occlusion::NonOccluded);
        }
    }
    for r in regions {
        for c in r.cells.iter() {
            let slot: &mut Option<Occlusion> = out.get_mut(c);
            if let Some(cur) = slot {
                if r.kind.priority() < cur.priority() {
                    *slot = Some(r.kind);
                }
            }
        }
    }
    out
}
