use std::fmt;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use crate::cg::Thresholds;
use crate::dog::DogConfig;
use crate::geom::Vec2;
use crate::grid::{CellIndex, GridGeometry};
use crate::scene::{LidarConfig, LidarLayer, Scene, Violation};

/// Version of the scenario file format understood by this crate.
pub const SCENARIO_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    #[allow(dead_code)]
    schema_version: u32,
    #[serde(default)]
    name: String,
    grid: GridSection,
    lidar: LidarSection,
    scene: Scene<f64>,
    run: RunSettings,
    #[serde(default)]
    thresholds: Thresholds<f64>,
    #[serde(default)]
    dog: DogConfig<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct GridSection {
    cell_size: f64,
    width: usize,
    height: usize,
    /// `[col, row]` of the cell that holds the ego vehicle.
    ego_anchor: [usize; 2],
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct LidarSection {
    preset: Option<String>,
    layers: Option<Vec<LidarLayer<f64>>>,
    angular_resolution: Option<f64>,
    mount_height: Option<f64>,
    max_range: Option<f64>,
}

/// Simulation settings of a scenario.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSettings {
    /// Number of frames simulated by default (frames `0..frames`).
    pub frames: usize,
    pub seed: u64,
    /// Probability that a ground return is misclassified as an obstacle.
    #[serde(default)]
    pub ground_flip_rate: f64,
}

/// A validated scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub geom: GridGeometry<f64>,
    pub lidar: LidarConfig<f64>,
    pub scene: Scene<f64>,
    pub run: RunSettings,
    pub thresholds: Thresholds<f64>,
    pub dog: DogConfig<f64>,
}

/// Every problem found in a scenario file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violations(pub Vec<Violation>);

impl fmt::Display for Violations {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} violation(s)", self.0.len())?;
        for v in &self.0 {
            write!(f, "\n  {v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read scenario {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot parse scenario {path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("scenario {path}: unsupported schema_version {found} (expected {SCENARIO_SCHEMA_VERSION})")]
    SchemaVersion { path: PathBuf, found: String },
    #[error("scenario {path}: {violations}")]
    Invalid {
        path: PathBuf,
        violations: Violations,
    },
}

fn resolve_lidar(s: &LidarSection, out: &mut Vec<Violation>) -> Option<LidarConfig<f64>> {
    let base = match s.preset.as_deref() {
        Some("ibeo_lux") => Some(LidarConfig::ibeo_lux()),
        Some(other) => {
            out.push(Violation::new(
                "lidar.preset",
                format!("unknown preset '{other}' (known: ibeo_lux)"),
            ));
            return None;
        }
        None => None,
    };
    let pick = |v: Option<f64>, preset: Option<f64>, name: &str, out: &mut Vec<Violation>| {
        let r = v.or(preset);
        if r.is_none() {
            out.push(Violation::new(
                format!("lidar.{name}"),
                "required when no preset is given",
            ));
        }
        r
    };
    let layers = s.layers.clone().or(base.as_ref().map(|b| b.layers.clone()));
    if layers.is_none() {
        out.push(Violation::new("lidar.layers", "required when no preset is given"));
    }
    let res = pick(s.angular_resolution, base.as_ref().map(|b| b.angular_resolution), "angular_resolution", out);
    let mount = pick(s.mount_height, base.as_ref().map(|b| b.mount_height), "mount_height", out);
    let range = pick(s.max_range, base.as_ref().map(|b| b.max_range), "max_range", out);
    Some(LidarConfig {
        layers: layers?,
        angular_resolution: res?,
        mount_height: mount?,
        max_range: range?,
    })
}

/// Parses and validates a scenario from TOML text. `path` is only used in
/// error messages.
pub fn parse_scenario(text: &str, path: &Path) -> Result<Scenario, ScenarioError> {
    let parse_err = |e: toml::de::Error| ScenarioError::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    };
    let raw: toml::Table = toml::from_str(text).map_err(parse_err)?;
    match raw.get("schema_version") {
        Some(toml::Value::Integer(v)) if *v == i64::from(SCENARIO_SCHEMA_VERSION) => {}
        Some(v) => {
            return Err(ScenarioError::SchemaVersion {
                path: path.to_path_buf(),
                found: v.to_string(),
            })
        }
        None => {
            return Err(ScenarioError::SchemaVersion {
                path: path.to_path_buf(),
                found: "none".into(),
            })
        }
    }
    let file: ScenarioFile = toml::from_str(text).map_err(parse_err)?;

    let mut v = Vec::new();
    let [ac, ar] = file.grid.ego_anchor;
    let geom = match GridGeometry::new(
        file.grid.cell_size,
        file.grid.width,
        file.grid.height,
        Vec2::zero(),
        CellIndex::new(ac, ar),
    ) {
        Ok(g) => Some(g),
        Err(e) => {
            v.push(Violation::new("grid", e.to_string()));
            None
        }
    };
    let lidar = resolve_lidar(&file.lidar, &mut v);
    if let Some(l) = &lidar {
        l.validate("lidar", &mut v);
    }
    file.scene.validate("scene", &mut v);
    file.thresholds.validate("thresholds", &mut v);
    file.dog.validate("dog", &mut v);
    if file.run.frames == 0 {
        v.push(Violation::new("run.frames", "must be at least 1"));
    }
    if !(0.0..=1.0).contains(&file.run.ground_flip_rate) {
        v.push(Violation::new("run.ground_flip_rate", "must lie in [0, 1]"));
    }
    if file.run.frames > 0
        && file.scene.frame_period > 0.0
        && !file.scene.ego.is_empty()
        && file.scene.last_frame() + 1 < file.run.frames
    {
        v.push(Violation::new(
            "run.frames",
            format!(
                "{} frames need the ego trajectory to reach t = {} s, it ends at frame {}",
                file.run.frames,
                file.scene.frame_time(file.run.frames - 1),
                file.scene.last_frame()
            ),
        ));
    }

    match (geom, lidar) {
        (Some(geom), Some(lidar)) if v.is_empty() => Ok(Scenario {
            name: file.name,
            geom,
            lidar,
            scene: file.scene,
            run: file.run,
            thresholds: file.thresholds,
            dog: file.dog,
        }),
        _ => Err(ScenarioError::Invalid {
            path: path.to_path_buf(),
            violations: Violations(v),
        }),
    }
}

pub fn load_scenario(path: &Path) -> Result<Scenario, ScenarioError> {
    let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_scenario(&text, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
schema_version = 1

[grid]
cell_size = 0.5
width = 40
height = 20
ego_anchor = [5, 10]

[lidar]
preset = "ibeo_lux"

[scene]
frame_period = 0.1

[[scene.ego]]
time = 0.0
position = [0.0, 0.0]

[[scene.ego]]
time = 1.0
position = [5.0, 0.0]
speed = 5.0

[[scene.obstacles]]
label = "box"
center = [10.0, 2.0]
size = [2.0, 1.0]
base_height = 0.0
top_height = 1.5

[run]
frames = 10
seed = 7
"#;

    fn p() -> &'static Path {
        Path::new("test.toml")
    }

    #[test]
    fn minimal_scenario_loads_with_defaults() {
        let s = parse_scenario(MINIMAL, p()).unwrap();
        assert_eq!(s.thresholds, Thresholds::default());
        assert_eq!(s.dog, DogConfig::default());
        assert_eq!(s.lidar, LidarConfig::ibeo_lux());
        assert_eq!(s.run.frames, 10);
        assert_eq!(s.scene.obstacles.len(), 1);
    }

    #[test]
    fn flat_obstacle_is_rejected_by_name() {
        let text = MINIMAL.replace("top_height = 1.5", "top_height = 0.0");
        let err = parse_scenario(&text, p()).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("scene.obstacles[0].top_height"), "{msg}");
        assert!(msg.contains("'box'"), "{msg}");
    }

    #[test]
    fn unknown_field_is_rejected() {
        let text = MINIMAL.replace("seed = 7", "seed = 7\ncolour = 3");
        assert!(matches!(parse_scenario(&text, p()), Err(ScenarioError::Parse { .. })));
    }

    #[test]
    fn wrong_schema_version() {
        let text = MINIMAL.replace("schema_version = 1", "schema_version = 2");
        assert!(matches!(
            parse_scenario(&text, p()),
            Err(ScenarioError::SchemaVersion { .. })
        ));
        let text = MINIMAL.replace("schema_version = 1", "");
        assert!(matches!(
            parse_scenario(&text, p()),
            Err(ScenarioError::SchemaVersion { .. })
        ));
    }

    #[test]
    fn every_violation_is_reported() {
        let text = MINIMAL
            .replace("frames = 10", "frames = 50")
            .replace("cell_size = 0.5", "cell_size = -1.0")
            .replace("[run]", "[thresholds]\nt_o = 2.0\n\n[run]");
        let Err(ScenarioError::Invalid { violations, .. }) = parse_scenario(&text, p()) else {
            panic!("expected violations");
        };
        let paths: Vec<_> = violations.0.iter().map(|v| v.path.as_str()).collect();
        assert!(paths.contains(&"grid"), "{paths:?}");
        assert!(paths.contains(&"thresholds.t_o"), "{paths:?}");
        assert!(paths.contains(&"run.frames"), "{paths:?}");
    }

    #[test]
    fn missing_file() {
        assert!(matches!(
            load_scenario(Path::new("/nonexistent/s.toml")),
            Err(ScenarioError::Io { .. })
        ));
    }
}
