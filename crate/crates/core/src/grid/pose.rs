use serde::{Deserialize, Serialize};

use crate::geom::{wrap_angle, Vec2};
use crate::scalar::Scalar;

/// Planar pose of the ego vehicle. `heading` is kept in (-π, π].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct EgoPose<T: Scalar = f64> {
    pub position: Vec2<T>,
    heading: T,
    pub speed: T,
}

impl<T: Scalar> EgoPose<T> {
    pub fn new(position: Vec2<T>, heading: T, speed: T) -> Self {
        Self {
            position,
            heading: wrap_angle(heading),
            speed,
        }
    }

    #[inline]
    pub fn heading(&self) -> T {
        self.heading
    }

    pub fn set_heading(&mut self, heading: T) {
        self.heading = wrap_angle(heading);
    }
}
