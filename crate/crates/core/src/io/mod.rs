//! Scenario files, the frame runner, grid dumps and PPM rendering.

mod diagnostics;
mod dump;
mod fovdump;
mod render;
mod runner;
mod scenario;
mod session;

pub use diagnostics::FrameRecord;
pub use dump::{
    DumpError, DumpHeader, DumpIoError, DumpIssue, DumpRow, GridDump, COLUMNS, DUMP_SCHEMA_VERSION,
};
pub use fovdump::{mask_dump_text, parse_mask_dump};
pub use render::{label_color, rasterize, write_ppm, write_ppm_file, EGO_COLOR};
pub use runner::{RunError, Runner, CLASSIFY_STREAM};
pub use scenario::{
    load_scenario, parse_scenario, RunSettings, Scenario, ScenarioError, Violations,
    SCENARIO_SCHEMA_VERSION,
};
pub use session::{
    apply_overrides, dump_name, execute, image_name, parse_assignment, write_text, FrameRange,
    OutputToggles, RunConfig, RunSummary, SessionError, DIAGNOSTICS_NAME,
};
