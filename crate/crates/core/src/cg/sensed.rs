use crate::dog::ObservationModel;
use crate::grid::{CellMask, GridGeometry};
use crate::raster::traverse;
use crate::scalar::Scalar;
use crate::scene::BeamSample;

/// Cells crossed by at least one beam on its way to the hit point, hit cell
/// included. A beam stops counting once its height above `ego_ground`
/// exceeds the top of the occupied band.
pub fn compute_sensed_area<T: Scalar>(
    samples: &[BeamSample<T>],
    geom: &GridGeometry<T>,
    model: &ObservationModel<T>,
    ego_ground: T,
) -> CellMask {
    let mut mask = CellMask::new(geom.width(), geom.height());
    let z_hi = model.occ_height_band[1];
    for s in samples {
        let ray = &s.ray;
        let z0 = ray.origin.z - ego_ground;
        let limit = if z0 > z_hi {
            continue;
        } else if ray.tan_elevation > T::zero() {
            ((z_hi - z0) / ray.tan_elevation).min(ray.length)
        } else {
            ray.length
        };
        for c in traverse(geom, ray.origin.xy(), ray.dir, limit) {
            mask.insert(c.cell);
        }
    }
    mask
}
