//! Categorized Grid over a LiDAR dynamic occupancy grid.
//!
//! The crate is organized bottom-up:
//!
//! - [`grid`]: geometry, per-cell state, label vocabulary.
//! - [`raster`]: line rasterization, ray traversal, contour tracing.
//! - [`scene`]: 2.5D synthetic worlds and multi-layer LiDAR simulation.
//! - [`dog`]: evidential occupancy, particle velocity estimation, heights.
//! - [`cg`]: the categorization pipeline producing a label vector per cell.
//! - [`io`]: scenario files, grid dumps, rendering and the frame runner.
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix it to `f64`, which is what file I/O and the CLI use.

pub mod cg;
pub mod dog;
pub mod geom;
pub mod grid;
pub mod io;
pub mod raster;
pub mod scalar;
pub mod scene;

pub use scalar::Scalar;

pub type Vec2 = geom::Vec2<f64>;
pub type GridGeometry = grid::GridGeometry<f64>;
pub type CellState = grid::CellState<f64>;
pub type Masses = grid::Masses<f64>;
pub type EgoPose = grid::EgoPose<f64>;
pub type LidarConfig = scene::LidarConfig<f64>;
pub type Scene = scene::Scene<f64>;
pub type ObservationModel = dog::ObservationModel<f64>;
pub type ParticleConfig = dog::ParticleConfig<f64>;
pub type DogFrame = dog::DogFrame<f64>;
pub type Thresholds = cg::Thresholds<f64>;
pub type Cluster = cg::Cluster<f64>;
pub type CategorizedGrid = cg::CategorizedGrid<f64>;

/// Single-precision variants.
pub mod f32 {
    pub type Vec2 = crate::geom::Vec2<f32>;
    pub type GridGeometry = crate::grid::GridGeometry<f32>;
    pub type CellState = crate::grid::CellState<f32>;
    pub type Masses = crate::grid::Masses<f32>;
    pub type LidarConfig = crate::scene::LidarConfig<f32>;
    pub type Scene = crate::scene::Scene<f32>;
    pub type ObservationModel = crate::dog::ObservationModel<f32>;
    pub type Thresholds = crate::cg::Thresholds<f32>;
}
