use thiserror::Error;

use super::{LidarConfig, Scene};
use crate::geom::{Vec2, Vec3};
use crate::grid::EgoPose;
use crate::scalar::Scalar;

#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error("frame {frame} (t = {time} s) is outside the ego trajectory")]
    FrameOutOfTrajectory { frame: usize, time: f64 },
}

/// What a beam ran into.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Hit<T: Scalar = f64> {
    Obstacle { point: Vec3<T>, id: usize },
    Ground { point: Vec3<T> },
    MaxRange,
}

impl<T: Scalar> Hit<T> {
    pub fn point(&self) -> Option<Vec3<T>> {
        match *self {
            Hit::Obstacle { point, .. } | Hit::Ground { point } => Some(point),
            Hit::MaxRange => None,
        }
    }
}

/// The traversed path of a beam: `origin + d·(dir, tan_elevation)` for
/// horizontal distance `d ∈ [0, length]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ray<T: Scalar = f64> {
    pub origin: Vec3<T>,
    /// Unit horizontal direction in the world frame.
    pub dir: Vec2<T>,
    pub tan_elevation: T,
    /// Distance to the hit point, or the maximum range.
    pub length: T,
}

impl<T: Scalar> Ray<T> {
    #[inline]
    pub fn height_at(&self, d: T) -> T {
        self.origin.z + d * self.tan_elevation
    }

    #[inline]
    pub fn point_at(&self, d: T) -> Vec3<T> {
        let p = self.origin.xy() + self.dir.scale(d);
        Vec3::new(p.x, p.y, self.height_at(d))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSample<T: Scalar = f64> {
    pub layer: usize,
    /// Degrees in the sensor frame.
    pub azimuth: T,
    pub hit: Hit<T>,
    pub ray: Ray<T>,
}

/// One full sweep plus the sensor pose it was taken from.
#[derive(Debug, Clone, PartialEq)]
pub struct Scan<T: Scalar = f64> {
    pub frame: usize,
    pub ego: EgoPose<T>,
    /// Ground height under the ego vehicle; the DOG measures heights from here.
    pub ego_ground: T,
    pub sensor: Vec3<T>,
    pub samples: Vec<BeamSample<T>>,
}

/// Casts every beam of `lidar` from the ego pose at `frame`.
///
/// The first intersection among obstacles and terrain wins; beams meeting
/// neither end at the maximum range.
pub fn simulate_scan<T: Scalar>(
    scene: &Scene<T>,
    frame: usize,
    lidar: &LidarConfig<T>,
) -> Result<Scan<T>, SimError> {
    let time = scene.frame_time(frame);
    let ego = scene
        .ego_pose_at(time)
        .ok_or(SimError::FrameOutOfTrajectory {
            frame,
            time: time.as_f64(),
        })?;
    let ego_ground = scene.terrain.height_at(ego.position);
    let sensor = Vec3::new(
        ego.position.x,
        ego.position.y,
        ego_ground + lidar.mount_height,
    );
    let origin = sensor.xy();

    let mut samples = Vec::with_capacity(lidar.beam_count());
    for (li, layer) in lidar.layers.iter().enumerate() {
        let slope = layer.elevation.to_radians().tan();
        for az in lidar.azimuths(layer) {
            let dir = Vec2::from_angle(ego.heading() + az.to_radians());
            let mut best: Option<(T, Option<usize>)> = scene
                .terrain
                .first_ground_hit(origin, dir, sensor.z, slope, lidar.max_range)
                .map(|d| (d, None));
            for (id, ob) in scene.obstacles.iter().enumerate() {
                let limit = best.map(|b| b.0).unwrap_or(lidar.max_range);
                if let Some(d) = ob.ray_hit(origin, dir, sensor.z, slope, limit, time) {
                    if best.is_none_or(|b| d < b.0) {
                        best = Some((d, Some(id)));
                    }
                }
            }
            let mut ray = Ray {
                origin: sensor,
                dir,
                tan_elevation: slope,
                length: lidar.max_range,
            };
            let hit = match best {
                Some((d, id)) => {
                    ray.length = d;
                    let point = ray.point_at(d);
                    match id {
                        Some(id) => Hit::Obstacle { point, id },
                        None => Hit::Ground { point },
                    }
                }
                None => Hit::MaxRange,
            };
            samples.push(BeamSample {
                layer: li,
                azimuth: az,
                hit,
                ray,
            });
        }
    }
    Ok(Scan {
        frame,
        ego,
        ego_ground,
        sensor,
        samples,
    })
}
