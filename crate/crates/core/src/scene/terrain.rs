use serde::{Deserialize, Serialize};

use super::Violation;
use crate::geom::Vec2;
use crate::scalar::Scalar;

/// A planar piece of ground over an axis-aligned rectangle:
/// `z(p) = height + gradient · (p - anchor)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
#[serde(deny_unknown_fields)]
pub struct TerrainPatch<T: Scalar = f64> {
    pub min: Vec2<T>,
    pub max: Vec2<T>,
    pub anchor: Vec2<T>,
    pub height: T,
    #[serde(default = "Vec2::zero")]
    pub gradient: Vec2<T>,
}

impl<T: Scalar> TerrainPatch<T> {
    pub fn contains(&self, p: Vec2<T>) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    pub fn height_at(&self, p: Vec2<T>) -> T {
        self.height + self.gradient.dot(p - self.anchor)
    }

    /// Horizontal distances `[enter, exit]` over which `origin + d·dir`
    /// lies inside the patch rectangle.
    pub fn ray_span(&self, origin: Vec2<T>, dir: Vec2<T>) -> Option<(T, T)> {
        slab_span(origin, dir, self.min, self.max)
    }
}

/// Piecewise-planar ground. Where patches overlap the later one wins;
/// outside every patch the ground is flat at `base_height`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
#[serde(deny_unknown_fields)]
pub struct Terrain<T: Scalar = f64> {
    #[serde(default)]
    pub base_height: T,
    #[serde(default)]
    pub patches: Vec<TerrainPatch<T>>,
}

impl<T: Scalar> Default for Terrain<T> {
    fn default() -> Self {
        Self::flat(T::zero())
    }
}

impl<T: Scalar> Terrain<T> {
    pub fn flat(z: T) -> Self {
        Self {
            base_height: z,
            patches: Vec::new(),
        }
    }

    fn active(&self, p: Vec2<T>) -> Option<&TerrainPatch<T>> {
        self.patches.iter().rev().find(|patch| patch.contains(p))
    }

    pub fn height_at(&self, p: Vec2<T>) -> T {
        self.active(p)
            .map(|patch| patch.height_at(p))
            .unwrap_or(self.base_height)
    }

    /// First horizontal distance `d ∈ [0, max_d]` at which a beam of height
    /// `z0 + d·slope` meets the ground, found exactly per planar piece.
    pub fn first_ground_hit(
        &self,
        origin: Vec2<T>,
        dir: Vec2<T>,
        z0: T,
        slope: T,
        max_d: T,
    ) -> Option<T> {
        let mut breaks = vec![T::zero(), max_d];
        for patch in &self.patches {
            if let Some((a, b)) = patch.ray_span(origin, dir) {
                for d in [a, b] {
                    if d > T::zero() && d < max_d {
                        breaks.push(d);
                    }
                }
            }
        }
        breaks.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
        breaks.dedup();

        let half = T::lit(0.5);
        for w in breaks.windows(2) {
            let (a, b) = (w[0], w[1]);
            let mid = origin + dir.scale((a + b) * half);
            let ground = |d: T| {
                let p = origin + dir.scale(d);
                match self.active(mid) {
                    Some(patch) => patch.height_at(p),
                    None => self.base_height,
                }
            };
            let fa = z0 + slope * a - ground(a);
            let fb = z0 + slope * b - ground(b);
            if fa <= T::zero() {
                return Some(a);
            }
            if fb <= T::zero() {
                return Some(a + (b - a) * fa / (fa - fb));
            }
        }
        None
    }

    pub fn validate(&self, path: &str, out: &mut Vec<Violation>) {
        for (i, p) in self.patches.iter().enumerate() {
            if !(p.min.x < p.max.x && p.min.y < p.max.y) {
                out.push(Violation::new(
                    format!("{path}.patches[{i}]"),
                    "min must be below max on both axes",
                ));
            }
        }
    }
}

/// Slab test of a horizontal ray against an axis-aligned rectangle.
/// Returns the parameter interval clipped to `d ≥ 0`.
pub(crate) fn slab_span<T: Scalar>(
    origin: Vec2<T>,
    dir: Vec2<T>,
    min: Vec2<T>,
    max: Vec2<T>,
) -> Option<(T, T)> {
    let mut t0 = T::neg_infinity();
    let mut t1 = T::infinity();
    for (o, d, lo, hi) in [(origin.x, dir.x, min.x, max.x), (origin.y, dir.y, min.y, max.y)] {
        if d == T::zero() {
            if o < lo || o > hi {
                return None;
            }
        } else {
            let a = (lo - o) / d;
            let b = (hi - o) / d;
            let (a, b) = if a < b { (a, b) } else { (b, a) };
            t0 = t0.max(a);
            t1 = t1.min(b);
        }
    }
    let t0 = t0.max(T::zero());
    (t0 <= t1).then_some((t0, t1))
}
