//! `catgrid` command-line tool.

use std::path::PathBuf;
use std::process::ExitCode;

use catgrid::cg::{FovCache, Thresholds};
use catgrid::dog::ObservationModel;
use catgrid::geom::Vec2;
use catgrid::grid::{CellGrid, CellIndex, GridGeometry};
use catgrid::io::{
    execute, load_scenario, mask_dump_text, parse_assignment, write_ppm_file, write_text,
    FrameRange, GridDump, OutputToggles, RunConfig,
};
use catgrid::scene::LidarConfig;
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "catgrid", version, about = "Categorized Grid over a simulated LiDAR dynamic occupancy grid")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a scenario, categorize every frame and write the outputs.
    Run(RunArgs),
    /// Compute the M-FoV, O-FoV and F-FoV maps of a sensor and write one dump per map.
    Fov(FovArgs),
    /// Render an existing grid dump as a binary PPM image.
    Render(RenderArgs),
    /// Check the invariants of one or more grid dumps.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct Overrides {
    /// Override a threshold, e.g. `t_o=0.6`. Repeatable.
    #[arg(long = "threshold", value_name = "NAME=VALUE", value_parser = parse_assignment)]
    thresholds: Vec<(String, f64)>,
    /// Override an observation-model parameter, e.g. `discount=0.9`. Repeatable.
    #[arg(long = "model", value_name = "NAME=VALUE", value_parser = parse_assignment)]
    model: Vec<(String, f64)>,
}

#[derive(Args)]
struct RunArgs {
    /// Scenario file (TOML).
    #[arg(long)]
    scenario: PathBuf,
    /// Inclusive frame range `A..B` or a single frame. Defaults to every frame of the scenario.
    #[arg(long, value_parser = clap::value_parser!(FrameRange))]
    frames: Option<FrameRange>,
    /// Random seed; defaults to the scenario's seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory, created if missing.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[command(flatten)]
    overrides: Overrides,
    /// Do not write grid dumps.
    #[arg(long)]
    no_dump: bool,
    /// Do not write PPM images.
    #[arg(long)]
    no_render: bool,
    /// Also write the three FoV map dumps of every frame.
    #[arg(long)]
    fov: bool,
    /// Also write per-frame diagnostics as JSON lines.
    #[arg(long)]
    diagnostics: bool,
    /// Pixels per cell edge in images.
    #[arg(long, default_value_t = 2)]
    scale: usize,
}

#[derive(Args)]
struct FovArgs {
    /// Take sensor, grid, model and thresholds from a scenario file.
    #[arg(long, conflicts_with = "sensor")]
    scenario: Option<PathBuf>,
    /// Sensor preset (only `ibeo_lux`).
    #[arg(long, default_value = "ibeo_lux")]
    sensor: String,
    /// Ideal-observation iterations (overrides `n_iter`).
    #[arg(long)]
    n_iter: Option<usize>,
    /// Grid width in cells.
    #[arg(long, default_value_t = 240)]
    width: usize,
    /// Grid height in cells.
    #[arg(long, default_value_t = 160)]
    height: usize,
    /// Cell edge length in meters.
    #[arg(long, default_value_t = 0.5)]
    cell_size: f64,
    /// Column of the ego cell.
    #[arg(long, default_value_t = 40)]
    anchor_col: usize,
    /// Row of the ego cell.
    #[arg(long, default_value_t = 80)]
    anchor_row: usize,
    /// Sensor heading in degrees, counterclockwise from +x.
    #[arg(long, default_value_t = 0.0)]
    heading: f64,
    #[command(flatten)]
    overrides: Overrides,
    /// Output directory, created if missing.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct RenderArgs {
    /// Grid dump to render.
    dump: PathBuf,
    /// Output image; defaults to the dump path with a `.ppm` extension.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Pixels per cell edge.
    #[arg(long, default_value_t = 2)]
    scale: usize,
}

#[derive(Args)]
struct ValidateArgs {
    /// Grid dumps to check.
    #[arg(required = true)]
    dumps: Vec<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => run(a),
        Command::Fov(a) => fov(a),
        Command::Render(a) => render(a),
        Command::Validate(a) => validate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}

fn run(a: RunArgs) -> Result<(), String> {
    let cfg = RunConfig {
        scenario: a.scenario,
        thresholds: a.overrides.thresholds,
        model: a.overrides.model,
        seed: a.seed,
        frames: a.frames,
        out_dir: a.out,
        outputs: OutputToggles {
            dump: !a.no_dump,
            render: !a.no_render,
            fov: a.fov,
            diagnostics: a.diagnostics,
        },
        scale: a.scale,
    };
    let summary = execute(&cfg).map_err(|e| e.to_string())?;
    println!(
        "{} frames, {} dumps, {} images written to {}",
        summary.frames.len(),
        summary.dumps.len(),
        summary.images.len(),
        cfg.out_dir.display()
    );
    Ok(())
}

fn fov(a: FovArgs) -> Result<(), String> {
    let (lidar, geom, mut model, mut th) = match &a.scenario {
        Some(path) => {
            let s = load_scenario(path).map_err(|e| e.to_string())?;
            (s.lidar, s.geom, s.dog.model, s.thresholds)
        }
        None => {
            if a.sensor != "ibeo_lux" {
                return Err(format!("unknown sensor preset '{}' (expected ibeo_lux)", a.sensor));
            }
            let geom = GridGeometry::new(
                a.cell_size,
                a.width,
                a.height,
                Vec2::zero(),
                CellIndex::new(a.anchor_col, a.anchor_row),
            )
            .map_err(|e| e.to_string())?
            .centered_on(Vec2::zero());
            (LidarConfig::ibeo_lux(), geom, ObservationModel::default(), Thresholds::default())
        }
    };
    for (k, v) in &a.overrides.thresholds {
        th.set(k, *v)?;
    }
    for (k, v) in &a.overrides.model {
        model.set(k, *v)?;
    }
    if let Some(n) = a.n_iter {
        th.n_iter = n;
    }
    let mut problems = Vec::new();
    th.validate("thresholds", &mut problems);
    model.validate("model", &mut problems);
    if !problems.is_empty() {
        return Err(problems.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "));
    }
    std::fs::create_dir_all(&a.out).map_err(|e| format!("{}: {e}", a.out.display()))?;
    let heading = a.heading.to_radians();
    let mut cache = FovCache::new();
    let maps = cache.get(&lidar, &geom, heading, &model, &th);
    for (name, mask) in [("m_fov", &maps.m_fov), ("o_fov", &maps.o_fov), ("f_fov", &maps.f_fov)] {
        let path = a.out.join(format!("{name}.txt"));
        write_text(&path, &mask_dump_text(name, mask, &geom, heading, th.n_iter)).map_err(|e| e.to_string())?;
        println!("{name}: {} cells -> {}", mask.len(), path.display());
    }
    Ok(())
}

fn render(a: RenderArgs) -> Result<(), String> {
    let dump = GridDump::read_file(&a.dump)?;
    let h = &dump.header;
    if dump.rows.len() != h.width * h.height {
        return Err(format!(
            "{}: {} rows for a {}x{} grid",
            a.dump.display(),
            dump.rows.len(),
            h.width,
            h.height
        ));
    }
    let mut display = CellGrid::filled(h.width, h.height, catgrid::grid::DisplayLabel::Other);
    for r in &dump.rows {
        if r.cell.col >= h.width || r.cell.row >= h.height {
            return Err(format!("{}: cell {} outside the grid", a.dump.display(), r.cell));
        }
        *display.get_mut(r.cell) = r.display;
    }
    let out = a.out.unwrap_or_else(|| a.dump.with_extension("ppm"));
    let ego = CellIndex::new(h.anchor[0], h.anchor[1]);
    write_ppm_file(&out, &display, Some(ego), a.scale)?;
    println!("{}", out.display());
    Ok(())
}

fn validate(a: ValidateArgs) -> Result<(), String> {
    let mut failed = 0;
    for path in &a.dumps {
        let dump = match GridDump::read_file(path) {
            Ok(d) => d,
            Err(e) => {
                eprintln!("{e}");
                failed += 1;
                continue;
            }
        };
        let issues = dump.validate();
        if issues.is_empty() {
            println!("{}: ok", path.display());
        } else {
            for i in &issues {
                eprintln!("{}: {i}", path.display());
            }
            failed += 1;
        }
    }
    if failed == 0 {
        Ok(())
    } else {
        Err(format!("{failed} of {} dumps are invalid", a.dumps.len()))
    }
}
