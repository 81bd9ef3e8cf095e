use thiserror::Error;

use super::{
    categorize_occupancy, cluster_occupied, compute_sensed_area, label_dynamics, label_fov,
    label_occlusions, label_reliability, occlusion_kind, occlusion_region, resolve_render_label,
    Cluster, FovMaps, OcclusionRegion, Thresholds,
};
use crate::dog::{DogFrame, ObservationModel};
use crate::geom::Vec3;
use crate::grid::{
    CellGrid, CellIndex, CellMask, CellState, DisplayLabel, EgoPose, GridGeometry, LabelError,
    LabelState, Occupancy, Sensing,
};
use crate::scalar::Scalar;
use crate::scene::BeamSample;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum CgError {
    #[error("frame {frame}, cell {cell}: {source}")]
    Label {
        frame: usize,
        cell: CellIndex,
        source: LabelError,
    },
    #[error("frame {frame}: FoV maps are {got:?} but the grid is {want:?}")]
    FovShape {
        frame: usize,
        got: (usize, usize),
        want: (usize, usize),
    },
}

/// Counters useful when inspecting a run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize)]
pub struct FrameDiagnostics {
    /// Occupied cells demoted to unknown as cluster noise.
    pub noise_cells: usize,
    /// Clusters labeled oncoming because the ego sat on their center.
    pub bearing_undefined: usize,
    /// DOG cells whose velocity covariance was regularized.
    pub regularized_cells: usize,
    pub particles: usize,
}

/// A DOG frame with the full label state of every cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CategorizedGrid<T: Scalar = f64> {
    pub frame: usize,
    pub geom: GridGeometry<T>,
    pub ego: EgoPose<T>,
    pub sensor: Vec3<T>,
    pub cells: CellGrid<CellState<T>>,
    pub labels: CellGrid<LabelState>,
    pub display: CellGrid<DisplayLabel>,
    pub clusters: Vec<Cluster<T>>,
    pub regions: Vec<OcclusionRegion>,
    pub sensed: CellMask,
    pub diagnostics: FrameDiagnostics,
}

/// Categorizes one DOG frame: occupancy, clustering, dynamics and
/// reliability, then FoV, sensing and occlusion for the unknown cells.
pub fn run_frame<T: Scalar>(
    dog: &DogFrame<T>,
    samples: &[BeamSample<T>],
    fov: &FovMaps,
    model: &ObservationModel<T>,
    th: &Thresholds<T>,
) -> Result<CategorizedGrid<T>, CgError> {
    let geom = dog.geom;
    let (w, h) = (geom.width(), geom.height());
    if (fov.m_fov.width(), fov.m_fov.height()) != (w, h) {
        return Err(CgError::FovShape {
            frame: dog.frame,
            got: (fov.m_fov.width(), fov.m_fov.height()),
            want: (w, h),
        });
    }

    let occ_vec: Vec<Occupancy> = dog
        .cells
        .as_slice()
        .iter()
        .map(|c| categorize_occupancy(c.masses, th))
        .collect();
    let mut occ = CellGrid::from_vec(w, h, occ_vec);

    let clustering = cluster_occupied(&geom, &dog.cells, &occ, th);
    for &c in &clustering.noise {
        *occ.get_mut(c) = Occupancy::Unknown;
    }
    let mut clusters = clustering.clusters;
    let mut bearing_undefined = 0;
    for k in &mut clusters {
        k.reliability = Some(label_reliability(k, th));
        let (d, undefined) = label_dynamics(k, dog.ego.position, th);
        k.dynamics = Some(d);
        bearing_undefined += usize::from(undefined);
    }

    let sensed = compute_sensed_area(samples, &geom, model, dog.ego_ground);
    let sensor = dog.sensor.xy();
    let regions: Vec<OcclusionRegion> = clusters
        .iter()
        .map(|k| OcclusionRegion {
            cluster: k.id,
            cells: occlusion_region(&k.members, sensor, &geom),
            kind: occlusion_kind(k, th),
        })
        .collect();
    let occl = label_occlusions(&regions, &occ);

    let mut labels = Vec::with_capacity(geom.len());
    let mut display = Vec::with_capacity(geom.len());
    for (i, o) in occ.as_slice().iter().enumerate() {
        let cell = geom.from_linear(i);
        let state = match o {
            Occupancy::Occupied => {
                let k = &clusters[clustering.cluster_of.as_slice()[i]
                    .expect("occupied cells that are not noise belong to a cluster")];
                LabelState {
                    occ: Occupancy::Occupied,
                    reli: k.reliability,
                    dynamics: k.dynamics,
                    fov: None,
                    sen: None,
                    occl: None,
                }
            }
            Occupancy::Free => LabelState::free(),
            Occupancy::Unknown => LabelState {
                occ: Occupancy::Unknown,
                reli: None,
                dynamics: None,
                fov: Some(label_fov(cell, fov)),
                sen: Some(if sensed.contains(cell) {
                    Sensing::Sensed
                } else {
                    Sensing::Unsensed
                }),
                occl: occl.as_slice()[i],
            },
        };
        state.validate().map_err(|source| CgError::Label {
            frame: dog.frame,
            cell,
            source,
        })?;
        display.push(resolve_render_label(&state));
        labels.push(state);
    }

    Ok(CategorizedGrid {
        frame: dog.frame,
        geom,
        ego: dog.ego,
        sensor: dog.sensor,
        cells: dog.cells.clone(),
        labels: CellGrid::from_vec(w, h, labels),
        display: CellGrid::from_vec(w, h, display),
        clusters,
        regions,
        sensed,
        diagnostics: FrameDiagnostics {
            noise_cells: clustering.noise.len(),
            bearing_undefined,
            regularized_cells: dog.regularized_cells,
            particles: dog.particle_count,
        },
    })
}
