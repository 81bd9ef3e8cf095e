//! Raster primitives: line rasterization, exact ray/cell traversal,
//! Moore-neighbor contour tracing and enclosed-region fill.

mod contour;
mod line;
mod traverse;

pub use contour::{fill_enclosed, trace_outer_boundary};
pub use line::bresenham;
pub use traverse::{traverse, CellCrossing};
