use serde::{Deserialize, Serialize};

use crate::scalar::{lit, Scalar};
use crate::scene::Violation;

/// Inverse sensor model turning one scan into per-cell evidence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
#[serde(deny_unknown_fields, default)]
pub struct ObservationModel<T: Scalar = f64> {
    /// Occupied mass of a cell holding at least one obstacle point.
    pub m_occ_hit: T,
    /// Free mass contributed by each layer crossing a cell inside the free band.
    pub m_free_per_beam: T,
    pub m_free_cap: T,
    /// Heights (above ego ground) at which a beam counts as free evidence.
    pub free_height_band: [T; 2],
    /// Heights (above ego ground) at which a point counts as an obstacle.
    pub occ_height_band: [T; 2],
    /// Fraction of prior evidence retained each frame.
    pub discount: T,
}

impl<T: Scalar> Default for ObservationModel<T> {
    fn default() -> Self {
        Self {
            m_occ_hit: lit(0.9),
            m_free_per_beam: lit(0.2),
            m_free_cap: lit(0.6),
            free_height_band: [lit(0.1), lit(1.5)],
            occ_height_band: [lit(0.1), lit(3.0)],
            discount: lit(0.95),
        }
    }
}

impl<T: Scalar> ObservationModel<T> {
    pub const NAMES: [&'static str; 8] = [
        "m_occ_hit",
        "m_free_per_beam",
        "m_free_cap",
        "free_z_min",
        "free_z_max",
        "occ_z_min",
        "occ_z_max",
        "discount",
    ];

    /// Sets one parameter by name; the bands are addressed by their ends.
    pub fn set(&mut self, name: &str, value: f64) -> Result<(), String> {
        let v = T::lit(value);
        match name {
            "m_occ_hit" => self.m_occ_hit = v,
            "m_free_per_beam" => self.m_free_per_beam = v,
            "m_free_cap" => self.m_free_cap = v,
            "free_z_min" => self.free_height_band[0] = v,
            "free_z_max" => self.free_height_band[1] = v,
            "occ_z_min" => self.occ_height_band[0] = v,
            "occ_z_max" => self.occ_height_band[1] = v,
            "discount" => self.discount = v,
            _ => {
                return Err(format!(
                    "unknown model parameter '{name}' (expected one of {})",
                    Self::NAMES.join(", ")
                ))
            }
        }
        Ok(())
    }

    pub fn validate(&self, path: &str, out: &mut Vec<Violation>) {
        let unit = |v: T| v >= T::zero() && v <= T::one();
        for (name, v) in [
            ("m_occ_hit", self.m_occ_hit),
            ("m_free_per_beam", self.m_free_per_beam),
            ("m_free_cap", self.m_free_cap),
        ] {
            if !unit(v) {
                out.push(Violation::new(format!("{path}.{name}"), "must lie in [0, 1]"));
            }
        }
        if !(self.m_occ_hit > T::zero()) {
            out.push(Violation::new(format!("{path}.m_occ_hit"), "must be positive"));
        }
        if !(self.m_free_cap >= self.m_free_per_beam) {
            out.push(Violation::new(
                format!("{path}.m_free_cap"),
                "must be at least m_free_per_beam",
            ));
        }
        for (name, b) in [
            ("free_height_band", self.free_height_band),
            ("occ_height_band", self.occ_height_band),
        ] {
            if !(b[0] < b[1]) {
                out.push(Violation::new(
                    format!("{path}.{name}"),
                    "lower bound must be below upper bound",
                ));
            }
        }
        if !(self.discount > T::zero() && self.discount <= T::one()) {
            out.push(Violation::new(format!("{path}.discount"), "must lie in (0, 1]"));
        }
    }
}
