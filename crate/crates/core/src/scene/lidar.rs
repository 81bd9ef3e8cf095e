use serde::{Deserialize, Serialize};

use super::Violation;
use crate::scalar::{lit, Scalar};

/// One scan layer: a fixed elevation swept over a horizontal sector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
#[serde(deny_unknown_fields)]
pub struct LidarLayer<T: Scalar = f64> {
    /// Elevation angle in degrees, positive upward.
    pub elevation: T,
    /// Horizontal sector `[min, max]` in degrees, counter-clockwise from the
    /// vehicle's forward axis.
    pub fov: [T; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
#[serde(deny_unknown_fields)]
pub struct LidarConfig<T: Scalar = f64> {
    pub layers: Vec<LidarLayer<T>>,
    /// Horizontal step between beams, degrees.
    pub angular_resolution: T,
    /// Sensor height above the ground under the ego vehicle, meters.
    pub mount_height: T,
    /// Maximum horizontal range, meters.
    pub max_range: T,
}

impl<T: Scalar> LidarConfig<T> {
    /// Four-layer automotive scanner: layers at ±0.4° and ±1.2°, the two lower
    /// layers sweep [-50°, 50°] and the two upper ones [-50°, 35°], 0.25°
    /// steps. Mounted 0.5 m above ground with 200 m range.
    pub fn ibeo_lux() -> Self {
        let layer = |e: f64, lo: f64, hi: f64| LidarLayer {
            elevation: lit(e),
            fov: [lit(lo), lit(hi)],
        };
        Self {
            layers: vec![
                layer(-1.2, -50.0, 50.0),
                layer(-0.4, -50.0, 50.0),
                layer(0.4, -50.0, 35.0),
                layer(1.2, -50.0, 35.0),
            ],
            angular_resolution: lit(0.25),
            mount_height: lit(0.5),
            max_range: lit(200.0),
        }
    }

    /// Azimuths (degrees) sampled by `layer`: from the sector minimum in
    /// steps of the angular resolution, never past the maximum.
    pub fn azimuths(&self, layer: &LidarLayer<T>) -> impl Iterator<Item = T> + '_ {
        let [lo, hi] = layer.fov;
        let res = self.angular_resolution;
        let n = ((hi - lo) / res + lit(1e-9)).floor().to_usize().unwrap_or(0) + 1;
        (0..n).map(move |k| lo + T::from_count(k) * res)
    }

    pub fn beam_count(&self) -> usize {
        self.layers.iter().map(|l| self.azimuths(l).count()).sum()
    }

    pub fn validate(&self, path: &str, out: &mut Vec<Violation>) {
        if self.layers.is_empty() {
            out.push(Violation::new(format!("{path}.layers"), "at least one layer is required"));
        }
        if !(self.angular_resolution > T::zero()) {
            out.push(Violation::new(
                format!("{path}.angular_resolution"),
                "must be positive",
            ));
        }
        if !(self.max_range > T::zero()) {
            out.push(Violation::new(format!("{path}.max_range"), "must be positive"));
        }
        if !(self.mount_height >= T::zero()) {
            out.push(Violation::new(format!("{path}.mount_height"), "must be non-negative"));
        }
        for (i, l) in self.layers.iter().enumerate() {
            if !(l.fov[0] < l.fov[1]) {
                out.push(Violation::new(
                    format!("{path}.layers[{i}].fov"),
                    "minimum must be below maximum",
                ));
            }
            if !(l.elevation.abs() < lit(90.0)) {
                out.push(Violation::new(
                    format!("{path}.layers[{i}].elevation"),
                    "must lie strictly between -90 and 90 degrees",
                ));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn azimuth_sampling_is_inclusive_of_min() {
        let cfg = LidarConfig::<f64>::ibeo_lux();
        let wide: Vec<_> = cfg.azimuths(&cfg.layers[0]).collect();
        assert_eq!(wide.len(), 401);
        assert_eq!(wide[0], -50.0);
        assert!((wide[400] - 50.0).abs() < 1e-9);
        assert_eq!(cfg.azimuths(&cfg.layers[3]).count(), 341);
        assert_eq!(cfg.beam_count(), 2 * 401 + 2 * 341);
    }

    #[test]
    fn step_that_overshoots_is_dropped() {
        let cfg = LidarConfig::<f64> {
            layers: vec![LidarLayer {
                elevation: 0.0,
                fov: [0.0, 1.0],
            }],
            angular_resolution: 0.3,
            mount_height: 1.0,
            max_range: 10.0,
        };
        let az: Vec<_> = cfg.azimuths(&cfg.layers[0]).collect();
        assert_eq!(az.len(), 4);
        assert!((az[3] - 0.9).abs() < 1e-12);
    }

    #[test]
    fn validation_reports_every_problem() {
        let cfg = LidarConfig::<f64> {
            layers: vec![LidarLayer {
                elevation: 0.0,
                fov: [10.0, -10.0],
            }],
            angular_resolution: 0.0,
            mount_height: 1.0,
            max_range: -1.0,
        };
        let mut v = Vec::new();
        cfg.validate("lidar", &mut v);
        let paths: Vec<_> = v.iter().map(|v| v.path.as_str()).collect();
        assert_eq!(
            paths,
            ["lidar.angular_resolution", "lidar.max_range", "lidar.layers[0].fov"]
        );
    }
}
