use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{BeamSample, Hit};
use crate::geom::Vec3;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PointClass {
    Obstacle,
    Ground,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifiedPoint<T: Scalar = f64> {
    /// Index of the originating sample.
    pub beam: usize,
    pub point: Vec3<T>,
    pub class: PointClass,
    /// Simulator ground truth.
    pub truth: PointClass,
}

/// Obstacle/ground segmentation of the returned points.
///
/// Obstacle hits are always labeled obstacle. Each ground hit is labeled
/// obstacle with probability `ground_flip_rate`, independently. Beams that
/// reached the maximum range produce no point.
pub fn classify_points<T: Scalar, R: Rng + ?Sized>(
    samples: &[BeamSample<T>],
    ground_flip_rate: f64,
    rng: &mut R,
) -> Vec<ClassifiedPoint<T>> {
    let rate = ground_flip_rate.clamp(0.0, 1.0);
    let mut out = Vec::with_capacity(samples.len());
    for (beam, s) in samples.iter().enumerate() {
        match s.hit {
            Hit::Obstacle { point, .. } => out.push(ClassifiedPoint {
                beam,
                point,
                class: PointClass::Obstacle,
                truth: PointClass::Obstacle,
            }),
            Hit::Ground { point } => {
                // always draw so the stream does not depend on the rate
                let flip = rng.random::<f64>() < rate;
                out.push(ClassifiedPoint {
                    beam,
                    point,
                    class: if flip {
                        PointClass::Obstacle
                    } else {
                        PointClass::Ground
                    },
                    truth: PointClass::Ground,
                })
            }
            Hit::MaxRange => {}
        }
    }
    out
}

/// Deterministic per-frame generator for an independent random stream.
pub fn frame_rng(seed: u64, frame: usize, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng.set_word_pos((frame as u128) << 40);
    rng
}
