use serde::{Deserialize, Serialize};

use crate::scalar::{lit, Scalar};
use crate::scene::Violation;

/// Decision thresholds of the categorization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "", deny_unknown_fields, default)]
pub struct Thresholds<T: Scalar = f64> {
    /// Occupied mass needed for an occupied cell.
    pub t_o: T,
    /// Free mass needed for a free cell.
    pub t_f: T,
    /// Largest velocity difference (m/s) between joined neighbor cells.
    pub t_v_cl: T,
    /// Clusters with fewer cells are treated as noise.
    pub t_ncl: usize,
    /// Clusters slower than this (m/s) are static.
    pub t_v_static: T,
    /// Degrees between heading and the direction to the ego below which a
    /// moving cluster is oncoming.
    pub t_theta_onc: T,
    /// Minimum height span (m) of a reliable cluster.
    pub t_height_reli: T,
    /// Minimum observed share of a reliable cluster.
    pub t_obs_reli: T,
    /// Minimum mean particle age of a reliable cluster.
    pub t_age_reli: T,
    /// Ideal-observation iterations used to compute the FoV maps.
    pub n_iter: usize,
}

impl<T: Scalar> Default for Thresholds<T> {
    fn default() -> Self {
        Self {
            t_o: lit(0.6),
            t_f: lit(0.6),
            t_v_cl: lit(2.0),
            t_ncl: 3,
            t_v_static: lit(1.0),
            t_theta_onc: lit(60.0),
            t_height_reli: lit(0.4),
            t_obs_reli: lit(0.3),
            t_age_reli: lit(5.0),
            n_iter: 2,
        }
    }
}

impl<T: Scalar> Thresholds<T> {
    pub const NAMES: [&'static str; 10] = [
        "t_o",
        "t_f",
        "t_v_cl",
        "t_ncl",
        "t_v_static",
        "t_theta_onc",
        "t_height_reli",
        "t_obs_reli",
        "t_age_reli",
        "n_iter",
    ];

    /// Overrides one threshold by name.
    pub fn set(&mut self, name: &str, value: f64) -> Result<(), String> {
        let count = || {
            if value >= 0.0 && value.fract() == 0.0 {
                Ok(value as usize)
            } else {
                Err(format!("{name} must be a non-negative integer, got {value}"))
            }
        };
        match name {
            "t_o" => self.t_o = T::lit(value),
            "t_f" => self.t_f = T::lit(value),
            "t_v_cl" => self.t_v_cl = T::lit(value),
            "t_ncl" => self.t_ncl = count()?,
            "t_v_static" => self.t_v_static = T::lit(value),
            "t_theta_onc" => self.t_theta_onc = T::lit(value),
            "t_height_reli" => self.t_height_reli = T::lit(value),
            "t_obs_reli" => self.t_obs_reli = T::lit(value),
            "t_age_reli" => self.t_age_reli = T::lit(value),
            "n_iter" => self.n_iter = count()?,
            _ => {
                return Err(format!(
                    "unknown threshold '{name}' (expected one of {})",
                    Self::NAMES.join(", ")
                ))
            }
        }
        Ok(())
    }

    /// `(name, value)` pairs in a fixed order.
    pub fn entries(&self) -> [(&'static str, f64); 10] {
        [
            ("t_o", self.t_o.as_f64()),
            ("t_f", self.t_f.as_f64()),
            ("t_v_cl", self.t_v_cl.as_f64()),
            ("t_ncl", self.t_ncl as f64),
            ("t_v_static", self.t_v_static.as_f64()),
            ("t_theta_onc", self.t_theta_onc.as_f64()),
            ("t_height_reli", self.t_height_reli.as_f64()),
            ("t_obs_reli", self.t_obs_reli.as_f64()),
            ("t_age_reli", self.t_age_reli.as_f64()),
            ("n_iter", self.n_iter as f64),
        ]
    }

    pub fn validate(&self, path: &str, out: &mut Vec<Violation>) {
        let mut bad = |name: &str, msg: &str| out.push(Violation::new(format!("{path}.{name}"), msg));
        let unit_open = |v: T| v > T::zero() && v <= T::one();
        if !unit_open(self.t_o) {
            bad("t_o", "must lie in (0, 1]");
        }
        if !unit_open(self.t_f) {
            bad("t_f", "must lie in (0, 1]");
        }
        if !(self.t_v_cl > T::zero()) {
            bad("t_v_cl", "must be positive");
        }
        if self.t_ncl == 0 {
            bad("t_ncl", "must be at least 1");
        }
        if !(self.t_v_static >= T::zero()) {
            bad("t_v_static", "must be non-negative");
        }
        if !(self.t_theta_onc >= T::zero() && self.t_theta_onc < lit(90.0)) {
            bad("t_theta_onc", "must lie in [0, 90) degrees");
        }
        if !(self.t_height_reli >= T::zero()) {
            bad("t_height_reli", "must be non-negative");
        }
        if !(self.t_obs_reli >= T::zero() && self.t_obs_reli <= T::one()) {
            bad("t_obs_reli", "must lie in [0, 1]");
        }
        if !(self.t_age_reli >= T::zero()) {
            bad("t_age_reli", "must be non-negative");
        }
        if self.n_iter == 0 {
            bad("n_iter", "must be at least 1");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let mut v = Vec::new();
        Thresholds::<f64>::default().validate("thresholds", &mut v);
        assert!(v.is_empty(), "{v:?}");
    }

    #[test]
    fn set_by_name() {
        let mut t = Thresholds::<f64>::default();
        t.set("t_o", 0.7).unwrap();
        t.set("n_iter", 3.0).unwrap();
        assert_eq!(t.t_o, 0.7);
        assert_eq!(t.n_iter, 3);
        assert!(t.set("n_iter", 1.5).is_err());
        assert!(t.set("bogus", 1.0).is_err());
    }

    #[test]
    fn oncoming_angle_must_be_acute() {
        let t = Thresholds::<f64> {
            t_theta_onc: 90.0,
            ..Default::default()
        };
        let mut v = Vec::new();
        t.validate("th", &mut v);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].path, "th.t_theta_onc");
    }
}
