//! Synthetic 2.5D worlds and multi-layer LiDAR simulation.
//!
//! Heights are absolute world `z`. Beams are ideal rays: a beam leaving the
//! sensor at elevation `e` is at height `z0 + d·tan(e)` after travelling a
//! horizontal distance `d`, and all ranges in this module are horizontal
//! distances.

mod classify;
mod lidar;
mod obstacle;
mod sim;
mod terrain;
mod world;

pub use classify::{classify_points, frame_rng, ClassifiedPoint, PointClass};
pub use lidar::{LidarConfig, LidarLayer};
pub use obstacle::Obstacle;
pub use sim::{simulate_scan, BeamSample, Hit, Ray, Scan, SimError};
pub use terrain::{Terrain, TerrainPatch};
pub use world::{Scene, Violation, Waypoint};
