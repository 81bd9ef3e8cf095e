use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::CellBuckets;
use super::{
    cell_dynamics, ds_update, merge_heights, observe, predict_particles, rasterize_heights,
    update_weights_and_resample, ObservationModel, ParticleConfig, ParticleSet,
};
use crate::geom::Vec3;
use crate::grid::{CellGrid, CellIndex, CellState, EgoPose, GridGeometry, Masses};
use crate::scalar::{lit, Scalar};
use crate::scene::{frame_rng, ClassifiedPoint, Scan, Violation};

/// Random stream used by the particle filter.
pub const PARTICLE_STREAM: u64 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "", deny_unknown_fields, default)]
pub struct DogConfig<T: Scalar = f64> {
    pub model: ObservationModel<T>,
    pub particles: ParticleConfig<T>,
    /// Cells whose occupied mass falls below this forget their heights.
    pub height_clear_threshold: T,
}

impl<T: Scalar> Default for DogConfig<T> {
    fn default() -> Self {
        Self {
            model: ObservationModel::default(),
            particles: ParticleConfig::default(),
            height_clear_threshold: lit(0.2),
        }
    }
}

impl<T: Scalar> DogConfig<T> {
    pub fn validate(&self, path: &str, out: &mut Vec<Violation>) {
        self.model.validate(&format!("{path}.model"), out);
        self.particles.validate(&format!("{path}.particles"), out);
        let t = self.height_clear_threshold;
        if !(t >= T::zero() && t <= T::one()) {
            out.push(Violation::new(
                format!("{path}.height_clear_threshold"),
                "must lie in [0, 1]",
            ));
        }
    }
}

#[derive(Debug, Clone, Copy, Error, PartialEq)]
pub enum DogError {
    #[error("frame {frame}: total conflict in cell {cell}")]
    TotalConflict { frame: usize, cell: CellIndex },
    #[error("frame {frame}: grid origin is off the cell lattice")]
    Misaligned { frame: usize },
}

/// Grid state after one frame.
#[derive(Debug, Clone, PartialEq)]
pub struct DogFrame<T: Scalar = f64> {
    pub frame: usize,
    pub geom: GridGeometry<T>,
    pub ego: EgoPose<T>,
    pub ego_ground: T,
    pub sensor: Vec3<T>,
    pub cells: CellGrid<CellState<T>>,
    /// Cells whose velocity covariance needed regularization.
    pub regularized_cells: usize,
    pub particle_count: usize,
}

/// Stateful DOG that consumes one scan per frame.
#[derive(Debug, Clone)]
pub struct DogEngine<T: Scalar = f64> {
    cfg: DogConfig<T>,
    geom: GridGeometry<T>,
    cells: CellGrid<CellState<T>>,
    particles: ParticleSet<T>,
    seed: u64,
    started: bool,
}

impl<T: Scalar> DogEngine<T> {
    /// `geom` supplies the grid shape; it is recentered on the ego every frame.
    pub fn new(cfg: DogConfig<T>, geom: GridGeometry<T>, seed: u64) -> Self {
        let cells = CellGrid::filled(geom.width(), geom.height(), CellState::vacuous());
        Self {
            cfg,
            geom,
            cells,
            particles: ParticleSet::new(),
            seed,
            started: false,
        }
    }

    pub fn config(&self) -> &DogConfig<T> {
        &self.cfg
    }

    pub fn particles(&self) -> &ParticleSet<T> {
        &self.particles
    }

    /// Advances by `dt` seconds and fuses `scan`.
    ///
    /// The prior occupied mass of a cell is the weight of the particles
    /// predicted into it; the prior free mass carries over from the cell.
    pub fn step(
        &mut self,
        scan: &Scan<T>,
        points: &[ClassifiedPoint<T>],
        dt: T,
    ) -> Result<DogFrame<T>, DogError> {
        let frame = scan.frame;
        let mut rng = frame_rng(self.seed, frame, PARTICLE_STREAM);
        let geom = self.geom.centered_on(scan.ego.position);
        let (dc, dr) = self
            .geom
            .offset_to(&geom)
            .ok_or(DogError::Misaligned { frame })?;
        let prev = self.cells.shifted(dc, dr, CellState::vacuous());
        self.geom = geom;

        if self.started {
            predict_particles(&mut self.particles, dt, &self.cfg.particles, &geom, &mut rng);
        } else {
            self.particles.cull(&geom);
        }
        let predicted = self.particles.cell_weights(&geom);

        let model = &self.cfg.model;
        let obs = observe(&scan.samples, points, model, &geom, scan.ego_ground);
        let heights = rasterize_heights(points, &geom, scan.ego_ground);

        let n = geom.len();
        let mut posterior = Vec::with_capacity(n);
        for i in 0..n {
            let occ = predicted.as_slice()[i].min(T::one());
            let free = prev.as_slice()[i].masses.free.min(T::one() - occ);
            let prior = Masses::new(occ, free);
            let m = ds_update(prior, obs.masses.as_slice()[i], model.discount).map_err(|_| {
                DogError::TotalConflict {
                    frame,
                    cell: geom.from_linear(i),
                }
            })?;
            posterior.push(m);
        }
        let posterior = CellGrid::from_vec(geom.width(), geom.height(), posterior);

        update_weights_and_resample(
            &mut self.particles,
            &posterior,
            &geom,
            &self.cfg.particles,
            &mut rng,
        );
        self.started = true;

        let buckets = CellBuckets::build(&self.particles, &geom);
        let mut regularized = 0;
        let mut cells = Vec::with_capacity(n);
        for i in 0..n {
            let masses = posterior.as_slice()[i];
            let mut cell = CellState::vacuous();
            cell.masses = masses;
            cell.heights = merge_heights(
                prev.as_slice()[i].heights,
                heights.as_slice()[i],
                masses.occ,
                self.cfg.height_clear_threshold,
            );
            cell.observed_this_frame = obs.masses.as_slice()[i].occ > T::zero();
            let members = buckets.cell(i);
            cell.particle_count = members.len();
            if let Some(d) = cell_dynamics(
                members.iter().map(|&k| &self.particles.particles[k]),
                &self.cfg.particles,
            ) {
                cell.velocity = d.velocity;
                cell.velocity_cov = d.covariance;
                cell.particle_age_mean = d.age_mean;
                cell.is_dynamic = d.is_dynamic;
                regularized += usize::from(d.regularized);
            }
            cells.push(cell);
        }
        self.cells = CellGrid::from_vec(geom.width(), geom.height(), cells);

        Ok(DogFrame {
            frame,
            geom,
            ego: scan.ego,
            ego_ground: scan.ego_ground,
            sensor: scan.sensor,
            cells: self.cells.clone(),
            regularized_cells: regularized,
            particle_count: self.particles.len(),
        })
    }
}
