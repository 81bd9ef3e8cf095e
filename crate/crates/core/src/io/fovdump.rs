use std::fmt::Write as _;

use crate::grid::{CellIndex, CellMask, GridGeometry};

/// Delimited-text dump of one FoV mask: a short header, then one
/// `col,row,in` row per cell in row-major order.
pub fn mask_dump_text(name: &str, mask: &CellMask, geom: &GridGeometry<f64>, heading: f64, n_iter: usize) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# catgrid fov dump");
    let _ = writeln!(s, "# schema_version {}", super::DUMP_SCHEMA_VERSION);
    let _ = writeln!(s, "# map {name}");
    let _ = writeln!(
        s,
        "# geometry cell_size={:.16e} width={} height={} anchor_col={} anchor_row={}",
        geom.cell_size(),
        geom.width(),
        geom.height(),
        geom.ego_anchor().col,
        geom.ego_anchor().row
    );
    let _ = writeln!(s, "# heading={heading:.16e} n_iter={n_iter} cells={}", mask.len());
    s.push_str("col,row,in\n");
    for c in geom.cells() {
        let _ = writeln!(s, "{},{},{}", c.col, c.row, u8::from(mask.contains(c)));
    }
    s
}

/// Reads a mask dump back; `width`/`height` come from its header.
pub fn parse_mask_dump(text: &str) -> Result<CellMask, String> {
    let mut dims = None;
    let mut cells = Vec::new();
    for (i, l) in text.lines().enumerate() {
        if let Some(rest) = l.strip_prefix("# geometry ") {
            let get = |k: &str| {
                rest.split(' ')
                    .find_map(|kv| kv.strip_prefix(k)?.strip_prefix('=')?.parse::<usize>().ok())
            };
            dims = get("width").zip(get("height"));
            continue;
        }
        if l.starts_with('#') || l == "col,row,in" {
            continue;
        }
        let v: Vec<usize> = l
            .split(',')
            .map(|f| f.parse().map_err(|_| format!("line {}: bad field '{f}'", i + 1)))
            .collect::<Result<_, _>>()?;
        if v.len() != 3 || v[2] > 1 {
            return Err(format!("line {}: malformed row", i + 1));
        }
        if v[2] == 1 {
            cells.push(CellIndex::new(v[0], v[1]));
        }
    }
    let (w, h) = dims.ok_or("missing geometry header")?;
    if let Some(c) = cells.iter().find(|c| c.col >= w || c.row >= h) {
        return Err(format!("cell {c} outside a {w}x{h} grid"));
    }
    Ok(CellMask::from_cells(w, h, cells))
}
