//! Helpers shared by the integration tests.
#![allow(dead_code)]

use std::path::{Path, PathBuf};

use catgrid::grid::CellIndex;
use catgrid::io::{execute, FrameRange, GridDump, OutputToggles, RunConfig};

pub fn scenario_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../scenarios")
        .join(format!("{name}.toml"))
}

/// Runs a scenario file into `out` and returns the dump paths in frame order.
pub fn run_scenario(name: &str, seed: Option<u64>, frames: Option<FrameRange>, out: &Path) -> Vec<PathBuf> {
    let cfg = RunConfig {
        scenario: scenario_path(name),
        thresholds: Vec::new(),
        model: Vec::new(),
        seed,
        frames,
        out_dir: out.to_path_buf(),
        outputs: OutputToggles {
            dump: true,
            render: false,
            fov: false,
            diagnostics: false,
        },
        scale: 1,
    };
    let summary = execute(&cfg).expect("scenario run");
    let mut paths: Vec<PathBuf> = std::fs::read_dir(out)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "txt"))
        .collect();
    paths.sort();
    assert_eq!(paths, summary.dumps);
    paths
}

pub fn load_dumps(paths: &[PathBuf]) -> Vec<GridDump> {
    paths
        .iter()
        .map(|p| GridDump::read_file(p).unwrap_or_else(|e| panic!("{}: {e}", p.display())))
        .collect()
}

/// Axis-aligned box in world coordinates.
#[derive(Debug, Clone, Copy)]
pub struct Aabb {
    pub min: [f64; 2],
    pub max: [f64; 2],
}

impl Aabb {
    pub fn centered(center: [f64; 2], size: [f64; 2]) -> Self {
        Self {
            min: [center[0] - size[0] / 2.0, center[1] - size[1] / 2.0],
            max: [center[0] + size[0] / 2.0, center[1] + size[1] / 2.0],
        }
    }

    pub fn contains(&self, p: [f64; 2]) -> bool {
        (0..2).all(|k| p[k] >= self.min[k] && p[k] <= self.max[k])
    }

    pub fn corners(&self) -> [[f64; 2]; 4] {
        [
            self.min,
            [self.max[0], self.min[1]],
            self.max,
            [self.min[0], self.max[1]],
        ]
    }

    /// Slab test: does the closed segment `a`–`b` touch the box?
    pub fn hit_by_segment(&self, a: [f64; 2], b: [f64; 2]) -> bool {
        let (mut t0, mut t1) = (0.0f64, 1.0f64);
        for k in 0..2 {
            let d = b[k] - a[k];
            if d.abs() < 1e-15 {
                if a[k] < self.min[k] || a[k] > self.max[k] {
                    return false;
                }
                continue;
            }
            let mut lo = (self.min[k] - a[k]) / d;
            let mut hi = (self.max[k] - a[k]) / d;
            if lo > hi {
                std::mem::swap(&mut lo, &mut hi);
            }
            t0 = t0.max(lo);
            t1 = t1.min(hi);
            if t0 > t1 {
                return false;
            }
        }
        true
    }
}

/// Classification of a cell against the shadow of a set of boxes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shade {
    Full,
    Partial,
    Clear,
}

/// Geometry of a dump or test grid, enough to place cells in the world.
#[derive(Debug, Clone, Copy)]
pub struct Lattice {
    pub cell_size: f64,
    pub width: usize,
    pub height: usize,
    pub origin: [f64; 2],
}

impl Lattice {
    pub fn of(dump: &GridDump) -> Self {
        Self {
            cell_size: dump.header.cell_size,
            width: dump.header.width,
            height: dump.header.height,
            origin: dump.header.origin,
        }
    }

    pub fn cell_box(&self, c: CellIndex) -> Aabb {
        let x = self.origin[0] + c.col as f64 * self.cell_size;
        let y = self.origin[1] + c.row as f64 * self.cell_size;
        Aabb {
            min: [x, y],
            max: [x + self.cell_size, y + self.cell_size],
        }
    }

    pub fn center(&self, c: CellIndex) -> [f64; 2] {
        let b = self.cell_box(c);
        [(b.min[0] + b.max[0]) / 2.0, (b.min[1] + b.max[1]) / 2.0]
    }

    pub fn cells(&self) -> impl Iterator<Item = CellIndex> {
        let w = self.width;
        (0..w * self.height).map(move |i| CellIndex::new(i % w, i / w))
    }

    pub fn index(&self, c: CellIndex) -> usize {
        c.row * self.width + c.col
    }

    pub fn cell_at(&self, p: [f64; 2]) -> Option<CellIndex> {
        let fx = ((p[0] - self.origin[0]) / self.cell_size).floor();
        let fy = ((p[1] - self.origin[1]) / self.cell_size).floor();
        (fx >= 0.0 && fy >= 0.0 && (fx as usize) < self.width && (fy as usize) < self.height)
            .then(|| CellIndex::new(fx as usize, fy as usize))
    }

    /// Cells whose square overlaps `b` with positive area.
    pub fn cells_overlapping(&self, b: &Aabb) -> Vec<CellIndex> {
        self.cells()
            .filter(|&c| {
                let q = self.cell_box(c);
                q.min[0] < b.max[0] && q.max[0] > b.min[0] && q.min[1] < b.max[1] && q.max[1] > b.min[1]
            })
            .collect()
    }

    /// Samples a 5×5 lattice of points inset from the cell border and
    /// reports whether all, some or none of them lie in the shadow of
    /// `boxes` seen from `sensor`. Points inside a box count as shadowed.
    pub fn shade(&self, c: CellIndex, sensor: [f64; 2], boxes: &[Aabb]) -> Shade {
        let b = self.cell_box(c);
        let inset = 1e-6;
        let mut hit = 0;
        let n = 5;
        for i in 0..n {
            for j in 0..n {
                let fx = i as f64 / (n - 1) as f64;
                let fy = j as f64 / (n - 1) as f64;
                let p = [
                    b.min[0] + inset + fx * (self.cell_size - 2.0 * inset),
                    b.min[1] + inset + fy * (self.cell_size - 2.0 * inset),
                ];
                if boxes.iter().any(|bx| bx.hit_by_segment(sensor, p)) {
                    hit += 1;
                }
            }
        }
        match hit {
            0 => Shade::Clear,
            h if h == n * n => Shade::Full,
            _ => Shade::Partial,
        }
    }

    /// Shade of every cell, row-major.
    pub fn shade_map(&self, sensor: [f64; 2], boxes: &[Aabb]) -> Vec<Shade> {
        self.cells().map(|c| self.shade(c, sensor, boxes)).collect()
    }

    /// Cells of `map` equal to `Full` whose 8 neighbors are all `Full` too.
    pub fn eroded_full(&self, map: &[Shade]) -> Vec<bool> {
        self.cells()
            .map(|c| {
                for dr in -1i64..=1 {
                    for dc in -1i64..=1 {
                        let (cc, rr) = (c.col as i64 + dc, c.row as i64 + dr);
                        if cc < 0 || rr < 0 || cc >= self.width as i64 || rr >= self.height as i64 {
                            continue;
                        }
                        let j = rr as usize * self.width + cc as usize;
                        if map[j] != Shade::Full {
                            return false;
                        }
                    }
                }
                true
            })
            .collect()
    }

    /// Cells within Chebyshev distance 1 of a `Partial` cell.
    pub fn band(&self, map: &[Shade]) -> Vec<bool> {
        let mut out = vec![false; map.len()];
        for c in self.cells() {
            if map[self.index(c)] != Shade::Partial {
                continue;
            }
            for dr in -1i64..=1 {
                for dc in -1i64..=1 {
                    let (cc, rr) = (c.col as i64 + dc, c.row as i64 + dr);
                    if cc >= 0 && rr >= 0 && cc < self.width as i64 && rr < self.height as i64 {
                        out[rr as usize * self.width + cc as usize] = true;
                    }
                }
            }
        }
        out
    }
}

/// Dilates a cell set by one cell (8-neighborhood), clipped to the lattice.
pub fn dilate(l: &Lattice, cells: &[CellIndex]) -> Vec<bool> {
    let mut out = vec![false; l.width * l.height];
    for c in cells {
        for dr in -1i64..=1 {
            for dc in -1i64..=1 {
                let (cc, rr) = (c.col as i64 + dc, c.row as i64 + dr);
                if cc >= 0 && rr >= 0 && cc < l.width as i64 && rr < l.height as i64 {
                    out[rr as usize * l.width + cc as usize] = true;
                }
            }
        }
    }
    out
}

