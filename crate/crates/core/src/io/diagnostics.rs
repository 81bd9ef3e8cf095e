use serde::Serialize;

use crate::cg::{CategorizedGrid, FrameDiagnostics};
use crate::grid::DisplayLabel;

/// One JSON line of per-frame diagnostics.
#[derive(Debug, Clone, Serialize)]
pub struct FrameRecord {
    pub frame: usize,
    pub clusters: usize,
    pub occlusion_regions: usize,
    #[serde(flatten)]
    pub diagnostics: FrameDiagnostics,
    /// Cell count per display label, in palette order.
    pub labels: Vec<(String, usize)>,
}

impl FrameRecord {
    pub fn from_grid(grid: &CategorizedGrid<f64>) -> Self {
        let mut counts = vec![0usize; DisplayLabel::ALL.len()];
        for &l in grid.display.as_slice() {
            counts[DisplayLabel::ALL.iter().position(|&x| x == l).unwrap_or(0)] += 1;
        }
        Self {
            frame: grid.frame,
            clusters: grid.clusters.len(),
            occlusion_regions: grid.regions.len(),
            diagnostics: grid.diagnostics,
            labels: DisplayLabel::ALL
                .iter()
                .zip(counts)
                .map(|(l, n)| (l.to_string(), n))
                .collect(),
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("diagnostics serialize")
    }
}
