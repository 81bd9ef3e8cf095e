use serde::{Deserialize, Serialize};

use super::terrain::slab_span;
use super::Violation;
use crate::geom::Vec2;
use crate::scalar::{lit, Scalar};

/// Box-shaped obstacle moving with constant velocity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
#[serde(deny_unknown_fields)]
pub struct Obstacle<T: Scalar = f64> {
    pub label: String,
    /// Footprint center at time zero, meters.
    pub center: Vec2<T>,
    /// Footprint extent `[length, width]` along and across `yaw`, meters.
    pub size: Vec2<T>,
    /// Footprint orientation, radians.
    #[serde(default)]
    pub yaw: T,
    pub base_height: T,
    pub top_height: T,
    #[serde(default = "Vec2::zero")]
    pub velocity: Vec2<T>,
}

impl<T: Scalar> Obstacle<T> {
    pub fn center_at(&self, time: T) -> Vec2<T> {
        self.center + self.velocity.scale(time)
    }

    pub fn is_dynamic(&self) -> bool {
        self.velocity.norm() > T::zero()
    }

    fn to_local(&self, p: Vec2<T>, time: T) -> Vec2<T> {
        (p - self.center_at(time)).rotate(-self.yaw)
    }

    fn half_extent(&self) -> Vec2<T> {
        self.size.scale(lit(0.5))
    }

    /// Whether the footprint at `time` contains `p`.
    pub fn contains(&self, p: Vec2<T>, time: T) -> bool {
        let l = self.to_local(p, time);
        let h = self.half_extent();
        l.x.abs() <= h.x && l.y.abs() <= h.y
    }

    /// Horizontal distance at which a beam of height `z0 + d·slope` first
    /// touches the box, searched over `d ∈ [0, max_d]`.
    pub fn ray_hit(
        &self,
        origin: Vec2<T>,
        dir: Vec2<T>,
        z0: T,
        slope: T,
        max_d: T,
        time: T,
    ) -> Option<T> {
        let lo = self.to_local(origin, time);
        let ld = dir.rotate(-self.yaw);
        let h = self.half_extent();
        let (mut a, mut b) = slab_span(lo, ld, -h, h)?;
        b = b.min(max_d);
        // restrict to the distances where the beam is within [base, top]
        if slope == T::zero() {
            if z0 < self.base_height || z0 > self.top_height {
                return None;
            }
        } else {
            let d_base = (self.base_height - z0) / slope;
            let d_top = (self.top_height - z0) / slope;
            let (lo_d, hi_d) = if d_base < d_top {
                (d_base, d_top)
            } else {
                (d_top, d_base)
            };
            a = a.max(lo_d);
            b = b.min(hi_d);
        }
        (a <= b).then_some(a)
    }

    pub fn validate(&self, path: &str, out: &mut Vec<Violation>) {
        if !(self.top_height > self.base_height) {
            out.push(Violation::new(
                format!("{path}.top_height"),
                format!(
                    "obstacle '{}' has top_height {} not above base_height {}",
                    self.label, self.top_height, self.base_height
                ),
            ));
        }
        if !(self.size.x > T::zero() && self.size.y > T::zero()) {
            out.push(Violation::new(
                format!("{path}.size"),
                format!("obstacle '{}' needs a positive footprint", self.label),
            ));
        }
    }
}
