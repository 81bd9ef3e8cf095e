//! A compact Dynamic Occupancy Grid.
//!
//! Occupancy is tracked per cell as Dempster-Shafer masses over
//! `{occupied, free}`, updated every frame from the classified scan. A
//! bootstrap particle filter whose per-cell weight is tied to the occupied
//! mass supplies velocity, velocity covariance and particle age per cell.
//! Point heights are rasterized alongside.
//!
//! All heights in this module are measured from the ground under the ego
//! vehicle, as an onboard grid would see them.

mod ds;
mod dynamics;
mod engine;
mod heights;
mod model;
mod observe;
mod particles;

pub use ds::{ds_update, DsError};
pub use dynamics::{cell_dynamics, CellDynamics};
pub use engine::{DogConfig, DogEngine, DogError, DogFrame, PARTICLE_STREAM};
pub use heights::{merge_heights, rasterize_heights};
pub use model::ObservationModel;
pub use observe::{observe, Observation};
pub use particles::{
    predict_particles, update_weights_and_resample, CellBuckets, Particle, ParticleConfig, ParticleSet,
};
