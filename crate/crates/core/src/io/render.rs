use std::io::Write;
use std::path::Path;

use image::codecs::pnm::{PnmEncoder, PnmSubtype, SampleEncoding};
use image::{ExtendedColorType, ImageEncoder, ImageError};

use crate::grid::{CellGrid, CellIndex, DisplayLabel};

/// Color of the ego anchor marker.
pub const EGO_COLOR: [u8; 3] = [255, 0, 255];

/// Fixed color of each display label.
pub fn label_color(l: DisplayLabel) -> [u8; 3] {
    match l {
        DisplayLabel::OccupiedStatic => [0, 0, 0],
        DisplayLabel::Oncoming => [220, 30, 30],
        DisplayLabel::Receding => [30, 90, 230],
        DisplayLabel::Unreliable => [255, 160, 0],
        DisplayLabel::Free => [255, 255, 255],
        DisplayLabel::OcclStatic => [90, 90, 90],
        DisplayLabel::OcclDynamic => [240, 150, 150],
        DisplayLabel::OcclUnreliable => [250, 215, 140],
        DisplayLabel::MFov => [40, 40, 70],
        DisplayLabel::OFov => [150, 200, 150],
        DisplayLabel::FFov => [190, 230, 250],
        DisplayLabel::Unsensed => [200, 190, 230],
        DisplayLabel::Other => [200, 200, 200],
    }
}

/// RGB raster of a label grid with `scale`×`scale` pixels per cell and
/// north up. Returns (width, height, pixels).
pub fn rasterize(
    display: &CellGrid<DisplayLabel>,
    ego: Option<CellIndex>,
    scale: usize,
) -> (u32, u32, Vec<u8>) {
    let scale = scale.max(1);
    let (w, h) = (display.width(), display.height());
    let (pw, ph) = (w * scale, h * scale);
    let mut px = vec![0u8; pw * ph * 3];
    for (c, &l) in display.iter() {
        let color = if Some(c) == ego { EGO_COLOR } else { label_color(l) };
        let top = (h - 1 - c.row) * scale;
        for y in top..top + scale {
            for x in c.col * scale..(c.col + 1) * scale {
                let i = (y * pw + x) * 3;
                px[i..i + 3].copy_from_slice(&color);
            }
        }
    }
    (pw as u32, ph as u32, px)
}

/// Writes a binary PPM (P6) of the label grid.
pub fn write_ppm<W: Write>(
    out: W,
    display: &CellGrid<DisplayLabel>,
    ego: Option<CellIndex>,
    scale: usize,
) -> Result<(), ImageError> {
    let (w, h, px) = rasterize(display, ego, scale);
    PnmEncoder::new(out)
        .with_subtype(PnmSubtype::Pixmap(SampleEncoding::Binary))
        .write_image(&px, w, h, ExtendedColorType::Rgb8)
}

pub fn write_ppm_file(
    path: &Path,
    display: &CellGrid<DisplayLabel>,
    ego: Option<CellIndex>,
    scale: usize,
) -> Result<(), String> {
    let file = std::fs::File::create(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let mut w = std::io::BufWriter::new(file);
    write_ppm(&mut w, display, ego, scale).map_err(|e| format!("{}: {e}", path.display()))?;
    w.flush().map_err(|e| format!("{}: {e}", path.display()))
}
