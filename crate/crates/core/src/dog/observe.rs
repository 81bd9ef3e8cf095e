use super::ObservationModel;
use crate::grid::{CellGrid, GridGeometry, Masses};
use crate::raster::traverse;
use crate::scalar::Scalar;
use crate::scene::{BeamSample, ClassifiedPoint, Hit, PointClass};

/// Per-cell evidence of one scan.
#[derive(Debug, Clone, PartialEq)]
pub struct Observation<T: Scalar = f64> {
    /// `occ` is z_occ, `free` is z_free.
    pub masses: CellGrid<Masses<T>>,
    /// Number of distinct layers that crossed each cell inside the free band.
    pub free_layers: CellGrid<u32>,
}

impl<T: Scalar> Observation<T> {
    pub fn empty(geom: &GridGeometry<T>) -> Self {
        Self {
            masses: CellGrid::filled(geom.width(), geom.height(), Masses::vacuous()),
            free_layers: CellGrid::filled(geom.width(), geom.height(), 0),
        }
    }
}

/// Distance interval over which a beam's height above `ground` stays inside
/// `[lo, hi]`, clipped to `[0, end]`.
pub(crate) fn band_interval<T: Scalar>(
    origin_height: T,
    slope: T,
    band: [T; 2],
    end: T,
) -> Option<(T, T)> {
    let (lo, hi) = (band[0], band[1]);
    let (a, b) = if slope == T::zero() {
        if origin_height < lo || origin_height > hi {
            return None;
        }
        (T::zero(), end)
    } else {
        let d_lo = (lo - origin_height) / slope;
        let d_hi = (hi - origin_height) / slope;
        if d_lo < d_hi {
            (d_lo, d_hi)
        } else {
            (d_hi, d_lo)
        }
    };
    let a = a.max(T::zero());
    let b = b.min(end);
    (a < b).then_some((a, b))
}

/// Turns a classified scan into observation masses.
///
/// A cell holding an obstacle point whose height above `ego_ground` lies in
/// the occupied band gets `z_occ = m_occ_hit`. A layer counts as free
/// evidence for a cell when the midpoint of its crossing lies before the
/// hit and inside the free band; with `k` such layers
/// `z_free = min(m_free_cap, k·m_free_per_beam)`, reduced if needed so that
/// `z_occ + z_free ≤ 1`. The cell that stops an obstacle-hitting beam gets no
/// free evidence from that beam.
pub fn observe<T: Scalar>(
    samples: &[BeamSample<T>],
    points: &[ClassifiedPoint<T>],
    model: &ObservationModel<T>,
    geom: &GridGeometry<T>,
    ego_ground: T,
) -> Observation<T> {
    let mut obs = Observation::empty(geom);
    let mut layer_bits = CellGrid::<u64>::filled(geom.width(), geom.height(), 0);

    for s in samples {
        let ray = &s.ray;
        let rel_height = ray.origin.z - ego_ground;
        let Some((a, b)) =
            band_interval(rel_height, ray.tan_elevation, model.free_height_band, ray.length)
        else {
            continue;
        };
        let stops_on_obstacle = matches!(s.hit, Hit::Obstacle { .. });
        let crossings = traverse(geom, ray.origin.xy(), ray.dir, b);
        let n = crossings.len();
        for (i, c) in crossings.into_iter().enumerate() {
            if stops_on_obstacle && i + 1 == n && c.exit >= ray.length {
                continue;
            }
            let mid = c.midpoint();
            if mid >= a && mid <= b {
                *layer_bits.get_mut(c.cell) |= 1u64 << (s.layer % 64);
            }
        }
    }

    for p in points.iter().filter(|p| p.class == PointClass::Obstacle) {
        let z = p.point.z - ego_ground;
        if z < model.occ_height_band[0] || z > model.occ_height_band[1] {
            continue;
        }
        if let Some(c) = geom.world_to_cell(p.point.xy()) {
            obs.masses.get_mut(c).occ = model.m_occ_hit;
        }
    }

    for (i, bits) in layer_bits.as_slice().iter().enumerate() {
        let k = bits.count_ones();
        obs.free_layers.as_mut_slice()[i] = k;
        let m = &mut obs.masses.as_mut_slice()[i];
        let free = (T::lit(k as f64) * model.m_free_per_beam).min(model.m_free_cap);
        m.free = free.min(T::one() - m.occ).max(T::zero());
    }
    obs
}
