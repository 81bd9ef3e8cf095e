use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Obstacle, Terrain};
use crate::geom::{wrap_angle, Vec2};
use crate::grid::EgoPose;
use crate::scalar::Scalar;

/// One invariant violation, located by a dotted field path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub path: String,
    pub message: String,
}

impl Violation {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

/// Ego trajectory sample. Poses between waypoints are linearly interpolated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
#[serde(deny_unknown_fields)]
pub struct Waypoint<T: Scalar = f64> {
    /// Seconds.
    pub time: T,
    pub position: Vec2<T>,
    /// Radians, counter-clockwise from +x.
    #[serde(default)]
    pub heading: T,
    #[serde(default)]
    pub speed: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
#[serde(deny_unknown_fields)]
pub struct Scene<T: Scalar = f64> {
    /// Seconds between consecutive frames.
    pub frame_period: T,
    #[serde(default)]
    pub terrain: Terrain<T>,
    #[serde(default)]
    pub obstacles: Vec<Obstacle<T>>,
    pub ego: Vec<Waypoint<T>>,
}

impl<T: Scalar> Scene<T> {
    pub fn frame_time(&self, frame: usize) -> T {
        T::from_count(frame) * self.frame_period
    }

    /// Last frame index covered by the ego trajectory.
    pub fn last_frame(&self) -> usize {
        let end = self.ego.last().map(|w| w.time).unwrap_or_else(T::zero);
        (end / self.frame_period + T::lit(1e-9))
            .floor()
            .to_usize()
            .unwrap_or(0)
    }

    /// Interpolated ego pose at `time`, or `None` outside the trajectory.
    pub fn ego_pose_at(&self, time: T) -> Option<EgoPose<T>> {
        let first = self.ego.first()?;
        let last = self.ego.last()?;
        let tol = T::lit(1e-9);
        if time < first.time - tol || time > last.time + tol {
            return None;
        }
        if self.ego.len() == 1 {
            return Some(EgoPose::new(first.position, first.heading, first.speed));
        }
        let i = self
            .ego
            .windows(2)
            .position(|w| time <= w[1].time)
            .unwrap_or(self.ego.len() - 2);
        let (a, b) = (self.ego[i], self.ego[i + 1]);
        let span = b.time - a.time;
        let s = if span > T::zero() {
            ((time - a.time) / span).max(T::zero()).min(T::one())
        } else {
            T::one()
        };
        let position = a.position + (b.position - a.position).scale(s);
        let heading = a.heading + wrap_angle(b.heading - a.heading) * s;
        let speed = a.speed + (b.speed - a.speed) * s;
        Some(EgoPose::new(position, heading, speed))
    }

    pub fn validate(&self, path: &str, out: &mut Vec<Violation>) {
        if !(self.frame_period > T::zero()) {
            out.push(Violation::new(format!("{path}.frame_period"), "must be positive"));
        }
        if self.ego.is_empty() {
            out.push(Violation::new(format!("{path}.ego"), "at least one waypoint is required"));
        }
        for (i, w) in self.ego.windows(2).enumerate() {
            if !(w[1].time > w[0].time) {
                out.push(Violation::new(
                    format!("{path}.ego[{}].time", i + 1),
                    "waypoint times must be strictly increasing",
                ));
            }
        }
        self.terrain.validate(&format!("{path}.terrain"), out);
        for (i, o) in self.obstacles.iter().enumerate() {
            o.validate(&format!("{path}.obstacles[{i}]"), out);
        }
    }
}
