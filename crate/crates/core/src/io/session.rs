use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

use super::{
    load_scenario, mask_dump_text, write_ppm_file, FrameRecord, GridDump, RunError, Runner,
    Scenario, ScenarioError,
};
use crate::scene::Violation;

/// Inclusive range of frame indices, written `A..B` (or a single `N`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrameRange {
    pub first: usize,
    pub last: usize,
}

impl FrameRange {
    pub fn new(first: usize, last: usize) -> Result<Self, String> {
        if last < first {
            return Err(format!("frame range {first}..{last} is empty"));
        }
        Ok(Self { first, last })
    }

    pub fn len(&self) -> usize {
        self.last - self.first + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, f: usize) -> bool {
        f >= self.first && f <= self.last
    }
}

impl FromStr for FrameRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("'{s}' is not a frame range (expected A..B)"))
        };
        match s.split_once("..") {
            Some((a, b)) => Self::new(num(a)?, num(b.trim_start_matches('='))?),
            None => {
                let n = num(s)?;
                Self::new(n, n)
            }
        }
    }
}

/// Parses `NAME=VALUE`.
pub fn parse_assignment(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| format!("'{s}' is not NAME=VALUE"))?;
    let v: f64 = v
        .trim()
        .parse()
        .map_err(|_| format!("'{v}' is not a number in '{s}'"))?;
    Ok((k.trim().to_string(), v))
}

/// Which files a run writes for each frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OutputToggles {
    pub dump: bool,
    pub render: bool,
    pub fov: bool,
    pub diagnostics: bool,
}

impl Default for OutputToggles {
    fn default() -> Self {
        Self {
            dump: true,
            render: true,
            fov: false,
            diagnostics: false,
        }
    }
}

/// Everything needed to execute one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: PathBuf,
    pub thresholds: Vec<(String, f64)>,
    pub model: Vec<(String, f64)>,
    /// Overrides the scenario seed.
    pub seed: Option<u64>,
    /// Defaults to every frame of the scenario.
    pub frames: Option<FrameRange>,
    pub out_dir: PathBuf,
    pub outputs: OutputToggles,
    /// Pixels per cell edge in rendered images.
    pub scale: usize,
}

#[derive(Debug, Error)]
pub enum SessionError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error("invalid override: {0}")]
    Override(String),
    #[error("{0}")]
    Range(String),
    #[error("frame {frame}: {source}")]
    Run { frame: usize, source: RunError },
    #[error("{0}")]
    Output(String),
}

/// Files written by [`execute`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunSummary {
    pub frames: Vec<usize>,
    pub dumps: Vec<PathBuf>,
    pub images: Vec<PathBuf>,
    pub fov_maps: Vec<PathBuf>,
    pub diagnostics: Option<PathBuf>,
}

pub fn dump_name(frame: usize) -> String {
    format!("frame_{frame:05}.txt")
}

pub fn image_name(frame: usize) -> String {
    format!("frame_{frame:05}.ppm")
}

pub const DIAGNOSTICS_NAME: &str = "diagnostics.jsonl";

/// Applies `NAME=VALUE` overrides to the thresholds and the observation
/// model and re-checks both.
pub fn apply_overrides(
    scenario: &mut Scenario,
    thresholds: &[(String, f64)],
    model: &[(String, f64)],
) -> Result<(), String> {
    for (k, v) in thresholds {
        scenario.thresholds.set(k, *v)?;
    }
    for (k, v) in model {
        scenario.dog.model.set(k, *v)?;
    }
    let mut out: Vec<Violation> = Vec::new();
    scenario.thresholds.validate("thresholds", &mut out);
    scenario.dog.model.validate("dog.model", &mut out);
    if out.is_empty() {
        Ok(())
    } else {
        Err(out.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))
    }
}

/// Runs a scenario and writes the requested outputs for every frame in
/// the range. Earlier frames are still simulated so the filter state is
/// the same as in a full run.
pub fn execute(cfg: &RunConfig) -> Result<RunSummary, SessionError> {
    let mut scenario = load_scenario(&cfg.scenario)?;
    apply_overrides(&mut scenario, &cfg.thresholds, &cfg.model).map_err(SessionError::Override)?;
    let available = scenario.scene.last_frame() + 1;
    let range = match cfg.frames {
        Some(r) => r,
        None => FrameRange::new(0, scenario.run.frames.saturating_sub(1))
            .map_err(SessionError::Range)?,
    };
    if range.last >= available {
        return Err(SessionError::Range(format!(
            "frame {} is past the end of the ego trajectory (last frame {})",
            range.last,
            available - 1
        )));
    }
    let out = &cfg.out_dir;
    fs::create_dir_all(out).map_err(|e| SessionError::Output(format!("{}: {e}", out.display())))?;

    let seed = cfg.seed.unwrap_or(scenario.run.seed);
    let mut runner = Runner::with_seed(&scenario, seed);
    let mut summary = RunSummary::default();
    let mut diag = if cfg.outputs.diagnostics {
        let path = out.join(DIAGNOSTICS_NAME);
        let f = fs::File::create(&path).map_err(|e| SessionError::Output(format!("{}: {e}", path.display())))?;
        summary.diagnostics = Some(path.clone());
        Some((path, std::io::BufWriter::new(f)))
    } else {
        None
    };

    while runner.next_frame() <= range.last {
        let frame = runner.next_frame();
        let grid = runner.step().map_err(|source| SessionError::Run { frame, source })?;
        if !range.contains(frame) {
            continue;
        }
        summary.frames.push(frame);
        if cfg.outputs.dump {
            let path = out.join(dump_name(frame));
            GridDump::from_grid(&grid, &scenario.thresholds)
                .write_file(&path)
                .map_err(|e| SessionError::Output(e.to_string()))?;
            summary.dumps.push(path);
        }
        if cfg.outputs.render {
            let path = out.join(image_name(frame));
            write_ppm_file(&path, &grid.display, Some(grid.geom.ego_anchor()), cfg.scale)
                .map_err(SessionError::Output)?;
            summary.images.push(path);
        }
        if cfg.outputs.fov {
            if let Some(maps) = runner.fov_cache().current() {
                for (name, mask) in [("m_fov", &maps.m_fov), ("o_fov", &maps.o_fov), ("f_fov", &maps.f_fov)] {
                    let path = out.join(format!("fov_{frame:05}_{name}.txt"));
                    let text = mask_dump_text(name, mask, &grid.geom, grid.ego.heading(), scenario.thresholds.n_iter);
                    write_text(&path, &text)?;
                    summary.fov_maps.push(path);
                }
            }
        }
        if let Some((path, w)) = diag.as_mut() {
            writeln!(w, "{}", FrameRecord::from_grid(&grid).to_json_line())
                .map_err(|e| SessionError::Output(format!("{}: {e}", path.display())))?;
        }
    }
    if let Some((path, mut w)) = diag {
        w.flush().map_err(|e| SessionError::Output(format!("{}: {e}", path.display())))?;
    }
    Ok(summary)
}

pub fn write_text(path: &Path, text: &str) -> Result<(), SessionError> {
    fs::write(path, text).map_err(|e| SessionError::Output(format!("{}: {e}", path.display())))
}
