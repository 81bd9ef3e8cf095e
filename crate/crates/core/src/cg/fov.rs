use super::{categorize_occupancy, Thresholds};
use crate::dog::{ds_update, observe, ObservationModel};
use crate::geom::{wrap_angle, Vec2};
use crate::grid::{CellIndex, CellMask, FovLabel, GridGeometry, Masses, Occupancy};
use crate::scalar::{lit, Scalar};
use crate::scene::{simulate_scan, LidarConfig, Scene, Terrain, Waypoint};

/// Maximum, occupied and free field-of-view cell sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FovMaps {
    pub m_fov: CellMask,
    pub o_fov: CellMask,
    pub f_fov: CellMask,
}

/// Sensor position used for the FoV maps: the center of the ego anchor cell.
pub fn fov_origin<T: Scalar>(geom: &GridGeometry<T>) -> Vec2<T> {
    geom.cell_center(geom.ego_anchor())
}

fn in_sector<T: Scalar>(az_deg: T, fov: [T; 2]) -> bool {
    let tol = lit::<T>(1e-9);
    let full = lit::<T>(360.0);
    [az_deg - full, az_deg, az_deg + full]
        .into_iter()
        .any(|a| a >= fov[0] - tol && a <= fov[1] + tol)
}

/// Cells whose center lies inside some layer's horizontal sector (boundary
/// included) and within `max_range` of the sensor at the anchor cell. The
/// sensor's own cell is always included.
pub fn compute_m_fov<T: Scalar>(
    lidar: &LidarConfig<T>,
    geom: &GridGeometry<T>,
    heading: T,
) -> CellMask {
    let origin = fov_origin(geom);
    let mut mask = CellMask::new(geom.width(), geom.height());
    for c in geom.cells() {
        let d = geom.cell_center(c) - origin;
        let r = d.norm();
        let inside = if r == T::zero() {
            true
        } else if r > lidar.max_range {
            false
        } else {
            let az = wrap_angle(d.angle() - heading).to_degrees();
            lidar.layers.iter().any(|l| in_sector(az, l.fov))
        };
        if inside {
            mask.insert(c);
        }
    }
    mask
}

fn iterate<T: Scalar>(obs: Masses<T>, n_iter: usize, discount: T) -> Masses<T> {
    let mut m = Masses::vacuous();
    for _ in 0..n_iter {
        // an observation below total certainty never yields total conflict
        m = ds_update(m, obs, discount).unwrap_or(obs);
    }
    m
}

/// Ideal occupied observation of every M-FoV cell: each receives the full
/// obstacle-hit mass `n_iter` times.
pub fn compute_o_fov<T: Scalar>(
    m_fov: &CellMask,
    model: &ObservationModel<T>,
    th: &Thresholds<T>,
) -> CellMask {
    let m = iterate(Masses::new(model.m_occ_hit, T::zero()), th.n_iter, model.discount);
    if categorize_occupancy(m, th) == Occupancy::Occupied {
        m_fov.clone()
    } else {
        CellMask::new(m_fov.width(), m_fov.height())
    }
}

/// Scans an empty flat world from the anchor cell `n_iter` times and keeps
/// the M-FoV cells that end up free.
pub fn compute_f_fov<T: Scalar>(
    lidar: &LidarConfig<T>,
    geom: &GridGeometry<T>,
    heading: T,
    m_fov: &CellMask,
    model: &ObservationModel<T>,
    th: &Thresholds<T>,
) -> CellMask {
    let origin = fov_origin(geom);
    let scene = Scene {
        frame_period: T::one(),
        terrain: Terrain::flat(T::zero()),
        obstacles: Vec::new(),
        ego: vec![Waypoint {
            time: T::zero(),
            position: origin,
            heading,
            speed: T::zero(),
        }],
    };
    let mut mask = CellMask::new(geom.width(), geom.height());
    let Ok(scan) = simulate_scan(&scene, 0, lidar) else {
        return mask;
    };
    let obs = observe(&scan.samples, &[], model, geom, scan.ego_ground);
    for (i, z) in obs.masses.as_slice().iter().enumerate() {
        let c = geom.from_linear(i);
        if !m_fov.contains(c) {
            continue;
        }
        let m = iterate(*z, th.n_iter, model.discount);
        if categorize_occupancy(m, th) == Occupancy::Free {
            mask.insert(c);
        }
    }
    mask
}

pub fn compute_fov<T: Scalar>(
    lidar: &LidarConfig<T>,
    geom: &GridGeometry<T>,
    heading: T,
    model: &ObservationModel<T>,
    th: &Thresholds<T>,
) -> FovMaps {
    let m_fov = compute_m_fov(lidar, geom, heading);
    let o_fov = compute_o_fov(&m_fov, model, th);
    let f_fov = compute_f_fov(lidar, geom, heading, &m_fov, model, th);
    FovMaps { m_fov, o_fov, f_fov }
}

/// m_fov outside M-FoV, else o_fov outside O-FoV, else f_fov outside
/// F-FoV, else in_view.
pub fn label_fov(cell: CellIndex, maps: &FovMaps) -> FovLabel {
    if !maps.m_fov.contains(cell) {
        FovLabel::MFov
    } else if !maps.o_fov.contains(cell) {
        FovLabel::OFov
    } else if !maps.f_fov.contains(cell) {
        FovLabel::FFov
    } else {
        FovLabel::InView
    }
}

#[derive(Debug, Clone, PartialEq)]
struct FovKey<T: Scalar> {
    lidar: LidarConfig<T>,
    cell_size: T,
    width: usize,
    height: usize,
    anchor: CellIndex,
    heading: T,
    model: ObservationModel<T>,
    th: Thresholds<T>,
}

/// Keeps the last computed [`FovMaps`] and recomputes only when the sensor,
/// model, thresholds, grid shape or heading change.
#[derive(Debug, Clone, Default)]
pub struct FovCache<T: Scalar = f64> {
    entry: Option<(FovKey<T>, FovMaps)>,
    computations: usize,
}

impl<T: Scalar> FovCache<T> {
    pub fn new() -> Self {
        Self {
            entry: None,
            computations: 0,
        }
    }

    /// Number of times the maps were (re)computed.
    pub fn computations(&self) -> usize {
        self.computations
    }

    /// Maps returned by the last [`get`](Self::get).
    pub fn current(&self) -> Option<&FovMaps> {
        self.entry.as_ref().map(|(_, m)| m)
    }

    pub fn get(
        &mut self,
        lidar: &LidarConfig<T>,
        geom: &GridGeometry<T>,
        heading: T,
        model: &ObservationModel<T>,
        th: &Thresholds<T>,
    ) -> &FovMaps {
        let key = FovKey {
            lidar: lidar.clone(),
            cell_size: geom.cell_size(),
            width: geom.width(),
            height: geom.height(),
            anchor: geom.ego_anchor(),
            heading,
            model: *model,
            th: *th,
        };
        let stale = self.entry.as_ref().is_none_or(|(k, _)| *k != key);
        if stale {
            let maps = compute_fov(lidar, geom, heading, model, th);
            self.computations += 1;
            self.entry = Some((key, maps));
        }
        &self.entry.as_ref().expect("entry was just filled").1
    }
}
