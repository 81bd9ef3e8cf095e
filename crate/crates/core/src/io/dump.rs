use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

use crate::cg::{resolve_render_label, CategorizedGrid, Thresholds};
use crate::grid::{
    parse_slot, slot_str, CellIndex, DisplayLabel, LabelState, Masses, Occupancy, UnknownToken,
    NONE_TOKEN,
};

pub const DUMP_SCHEMA_VERSION: u32 = 1;

pub const COLUMNS: [&str; 16] = [
    "col", "row", "m_occ", "m_free", "h_min", "h_max", "v_x", "v_y", "age", "occ", "reli", "dyn",
    "fov", "sen", "occl", "display",
];

const TITLE: &str = "# catgrid grid dump";

/// Header of a grid dump.
#[derive(Debug, Clone, PartialEq)]
pub struct DumpHeader {
    pub schema_version: u32,
    pub frame: usize,
    pub cell_size: f64,
    pub width: usize,
    pub height: usize,
    pub origin: [f64; 2],
    pub anchor: [usize; 2],
    /// x, y, heading (rad), speed (m/s).
    pub ego: [f64; 4],
    pub thresholds: Vec<(String, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DumpRow {
    pub cell: CellIndex,
    pub m_occ: f64,
    pub m_free: f64,
    pub h_min: Option<f64>,
    pub h_max: Option<f64>,
    pub v_x: f64,
    pub v_y: f64,
    pub age: f64,
    pub labels: LabelState,
    pub display: DisplayLabel,
}

/// In-memory form of one dump file.
#[derive(Debug, Clone, PartialEq)]
pub struct GridDump {
    pub header: DumpHeader,
    pub rows: Vec<DumpRow>,
}

#[derive(Debug, Clone, Error, PartialEq)]
#[error("line {line}{}: {message}", cell.map(|c| format!(", cell {c}")).unwrap_or_default())]
pub struct DumpError {
    pub line: usize,
    pub cell: Option<CellIndex>,
    pub message: String,
}

#[derive(Debug, Error)]
#[error("{path}: {source}")]
pub struct DumpIoError {
    pub path: PathBuf,
    pub source: std::io::Error,
}

/// Invariant violation found by [`GridDump::validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct DumpIssue {
    pub cell: Option<CellIndex>,
    pub message: String,
}

impl fmt::Display for DumpIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.cell {
            Some(c) => write!(f, "cell {c}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt_num(v: Option<f64>) -> String {
    v.map(num).unwrap_or_else(|| NONE_TOKEN.to_string())
}

impl GridDump {
    pub fn from_grid(grid: &CategorizedGrid<f64>, th: &Thresholds<f64>) -> Self {
        let g = &grid.geom;
        let header = DumpHeader {
            schema_version: DUMP_SCHEMA_VERSION,
            frame: grid.frame,
            cell_size: g.cell_size(),
            width: g.width(),
            height: g.height(),
            origin: [g.origin().x, g.origin().y],
            anchor: [g.ego_anchor().col, g.ego_anchor().row],
            ego: [
                grid.ego.position.x,
                grid.ego.position.y,
                grid.ego.heading(),
                grid.ego.speed,
            ],
            thresholds: th.entries().iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        };
        let rows = g
            .cells()
            .map(|c| {
                let s = grid.cells.get(c);
                DumpRow {
                    cell: c,
                    m_occ: s.masses.occ,
                    m_free: s.masses.free,
                    h_min: s.heights.map(|h| h.min),
                    h_max: s.heights.map(|h| h.max),
                    v_x: s.velocity.x,
                    v_y: s.velocity.y,
                    age: s.particle_age_mean,
                    labels: *grid.labels.get(c),
                    display: *grid.display.get(c),
                }
            })
            .collect();
        Self { header, rows }
    }

    pub fn write_to<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        let h = &self.header;
        writeln!(w, "{TITLE}")?;
        writeln!(w, "# schema_version {}", h.schema_version)?;
        writeln!(w, "# frame {}", h.frame)?;
        writeln!(
            w,
            "# geometry cell_size={} width={} height={} origin_x={} origin_y={} anchor_col={} anchor_row={}",
            num(h.cell_size),
            h.width,
            h.height,
            num(h.origin[0]),
            num(h.origin[1]),
            h.anchor[0],
            h.anchor[1]
        )?;
        writeln!(
            w,
            "# ego x={} y={} heading={} speed={}",
            num(h.ego[0]),
            num(h.ego[1]),
            num(h.ego[2]),
            num(h.ego[3])
        )?;
        let th: Vec<String> = h.thresholds.iter().map(|(k, v)| format!("{k}={}", num(*v))).collect();
        writeln!(w, "# thresholds {}", th.join(" "))?;
        writeln!(w, "{}", COLUMNS.join(","))?;
        for r in &self.rows {
            let l = &r.labels;
            writeln!(
                w,
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                r.cell.col,
                r.cell.row,
                num(r.m_occ),
                num(r.m_free),
                opt_num(r.h_min),
                opt_num(r.h_max),
                num(r.v_x),
                num(r.v_y),
                num(r.age),
                l.occ,
                slot_str(&l.reli),
                slot_str(&l.dynamics),
                slot_str(&l.fov),
                slot_str(&l.sen),
                slot_str(&l.occl),
                r.display
            )?;
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("dump text is ASCII")
    }

    pub fn write_file(&self, path: &Path) -> Result<(), DumpIoError> {
        let io = |source| DumpIoError {
            path: path.to_path_buf(),
            source,
        };
        let file = std::fs::File::create(path).map_err(io)?;
        let mut w = std::io::BufWriter::new(file);
        self.write_to(&mut w).map_err(io)?;
        w.flush().map_err(io)
    }

    pub fn read_file(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        Self::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    /// Parses dump text. Rejects anything that is not exactly in the
    /// written format, naming the line and, for data rows, the cell.
    pub fn parse(text: &str) -> Result<Self, DumpError> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let mut next = |what: &str| {
            lines.next().ok_or_else(|| DumpError {
                line: 0,
                cell: None,
                message: format!("unexpected end of file, expected {what}"),
            })
        };
        let err = |line: usize, message: String| DumpError {
            line,
            cell: None,
            message,
        };

        let (n, l) = next("title")?;
        if l != TITLE {
            return Err(err(n, format!("expected '{TITLE}'")));
        }
        let (n, l) = next("schema_version")?;
        let schema_version: u32 = header_value(l, "# schema_version ").ok_or_else(|| err(n, "bad schema_version line".into()))?;
        if schema_version != DUMP_SCHEMA_VERSION {
            return Err(err(n, format!("unsupported schema_version {schema_version}")));
        }
        let (n, l) = next("frame")?;
        let frame: usize = header_value(l, "# frame ").ok_or_else(|| err(n, "bad frame line".into()))?;

        let (n, l) = next("geometry")?;
        let geo = key_values(l, "# geometry ", &[
            "cell_size", "width", "height", "origin_x", "origin_y", "anchor_col", "anchor_row",
        ])
        .map_err(|m| err(n, m))?;
        let (n2, l) = next("ego")?;
        let ego = key_values(l, "# ego ", &["x", "y", "heading", "speed"]).map_err(|m| err(n2, m))?;
        let (n3, l) = next("thresholds")?;
        let th_line = l
            .strip_prefix("# thresholds ")
            .ok_or_else(|| err(n3, "expected '# thresholds ...'".into()))?;
        let mut thresholds = Vec::new();
        for kv in th_line.split(' ') {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| err(n3, format!("malformed threshold '{kv}'")))?;
            let v: f64 = v.parse().map_err(|_| err(n3, format!("bad value for {k}")))?;
            thresholds.push((k.to_string(), v));
        }
        let as_count = |v: f64, name: &str| -> Result<usize, DumpError> {
            if v >= 0.0 && v.fract() == 0.0 {
                Ok(v as usize)
            } else {
                Err(err(n, format!("{name} must be a non-negative integer")))
            }
        };
        let header = DumpHeader {
            schema_version,
            frame,
            cell_size: geo[0],
            width: as_count(geo[1], "width")?,
            height: as_count(geo[2], "height")?,
            origin: [geo[3], geo[4]],
            anchor: [as_count(geo[5], "anchor_col")?, as_count(geo[6], "anchor_row")?],
            ego: [ego[0], ego[1], ego[2], ego[3]],
            thresholds,
        };

        let (n, l) = next("column header")?;
        if l != COLUMNS.join(",") {
            return Err(err(n, "unexpected column header".into()));
        }

        let mut rows = Vec::with_capacity(header.width * header.height);
        for (n, l) in lines {
            rows.push(parse_row(n, l)?);
        }
        Ok(Self { header, rows })
    }

    /// Checks the dump's invariants and returns every violation found.
    pub fn validate(&self) -> Vec<DumpIssue> {
        let mut out = Vec::new();
        let h = &self.header;
        if self.rows.len() != h.width * h.height {
            out.push(DumpIssue {
                cell: None,
                message: format!(
                    "{} rows for a {}x{} grid (expected {})",
                    self.rows.len(),
                    h.width,
                    h.height,
                    h.width * h.height
                ),
            });
        }
        for (i, r) in self.rows.iter().enumerate() {
            let mut issue = |message: String| {
                out.push(DumpIssue {
                    cell: Some(r.cell),
                    message,
                })
            };
            if h.width > 0 && (r.cell.col != i % h.width || r.cell.row != i / h.width) {
                issue(format!("row {i} is out of row-major order"));
            }
            let m = Masses::new(r.m_occ, r.m_free);
            if !(r.m_occ >= 0.0 && r.m_free >= 0.0 && m.is_valid(1e-9)) {
                issue(format!("invalid masses occ={} free={}", r.m_occ, r.m_free));
            }
            match (r.h_min, r.h_max) {
                (Some(a), Some(b)) if a > b => issue(format!("h_min {a} > h_max {b}")),
                (Some(_), None) | (None, Some(_)) => issue("h_min and h_max must both be set or both none".into()),
                _ => {}
            }
            if !(r.age >= 0.0) {
                issue(format!("negative age {}", r.age));
            }
            if let Err(e) = r.labels.validate() {
                issue(e.to_string());
            } else {
                let want = resolve_render_label(&r.labels);
                if r.display != want {
                    issue(format!("display label {} but the slots resolve to {want}", r.display));
                }
            }
            if r.labels.occ == Occupancy::Unknown && r.m_occ >= 1.0 {
                issue("unknown cell with full occupied mass".into());
            }
        }
        out
    }
}

fn header_value<V: FromStr>(line: &str, prefix: &str) -> Option<V> {
    line.strip_prefix(prefix)?.parse().ok()
}

fn key_values(line: &str, prefix: &str, keys: &[&str]) -> Result<Vec<f64>, String> {
    let rest = line
        .strip_prefix(prefix)
        .ok_or_else(|| format!("expected '{}...'", prefix))?;
    let parts: Vec<&str> = rest.split(' ').collect();
    if parts.len() != keys.len() {
        return Err(format!("expected {} fields after '{}'", keys.len(), prefix.trim()));
    }
    parts
        .iter()
        .zip(keys)
        .map(|(p, k)| {
            let v = p
                .strip_prefix(k)
                .and_then(|r| r.strip_prefix('='))
                .ok_or_else(|| format!("expected {k}=..., got '{p}'"))?;
            v.parse::<f64>().map_err(|_| format!("bad value for {k}: '{v}'"))
        })
        .collect()
}

fn parse_row(line: usize, text: &str) -> Result<DumpRow, DumpError> {
    let fields: Vec<&str> = text.split(',').collect();
    let col = fields.first().and_then(|s| s.parse::<usize>().ok());
    let row = fields.get(1).and_then(|s| s.parse::<usize>().ok());
    let cell = col.zip(row).map(|(c, r)| CellIndex::new(c, r));
    let fail = |message: String| DumpError {
        line,
        cell,
        message,
    };
    let Some(cell) = cell else {
        return Err(fail("malformed cell coordinates".into()));
    };
    if fields.len() != COLUMNS.len() {
        return Err(fail(format!(
            "expected {} fields, found {}",
            COLUMNS.len(),
            fields.len()
        )));
    }
    let f = |i: usize| -> Result<f64, DumpError> {
        fields[i]
            .parse::<f64>()
            .map_err(|_| fail(format!("{}: '{}' is not a number", COLUMNS[i], fields[i])))
    };
    let of = |i: usize| -> Result<Option<f64>, DumpError> {
        if fields[i] == NONE_TOKEN {
            Ok(None)
        } else {
            f(i).map(Some)
        }
    };
    let tok = |e: UnknownToken| fail(e.to_string());
    let occ: Occupancy = fields[9].parse().map_err(tok)?;
    let labels = LabelState {
        occ,
        reli: parse_slot(fields[10]).map_err(tok)?,
        dynamics: parse_slot(fields[11]).map_err(tok)?,
        fov: parse_slot(fields[12]).map_err(tok)?,
        sen: parse_slot(fields[13]).map_err(tok)?,
        occl: parse_slot(fields[14]).map_err(tok)?,
    };
    Ok(DumpRow {
        cell,
        m_occ: f(2)?,
        m_free: f(3)?,
        h_min: of(4)?,
        h_max: of(5)?,
        v_x: f(6)?,
        v_y: f(7)?,
        age: f(8)?,
        labels,
        display: fields[15].parse().map_err(tok)?,
    })
}
