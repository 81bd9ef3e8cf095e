//! Space categorization on top of a DOG frame.
//!
//! Every cell receives an occupancy label; occupied cells are grouped into
//! velocity-coherent clusters carrying dynamics and reliability labels, and
//! unknown cells are explained by field of view, sensing and occlusion.

mod cluster;
mod fov;
mod occlusion;
mod occupancy;
mod pipeline;
mod render;
mod sensed;
mod thresholds;

pub use cluster::{
    cluster_occupied, label_dynamics, label_reliability, partition_occupied, Cluster, Clustering,
};
pub use fov::{
    compute_f_fov, compute_fov, compute_m_fov, compute_o_fov, fov_origin, label_fov, FovCache,
    FovMaps,
};
pub use occlusion::{
    border_cells, label_occlusions, occlusion_kind, occlusion_region, OcclusionRegion,
};
pub use occupancy::categorize_occupancy;
pub use pipeline::{run_frame, CategorizedGrid, CgError, FrameDiagnostics};
pub use render::resolve_render_label;
pub use sensed::compute_sensed_area;
pub use thresholds::Thresholds;
