use super::ParticleConfig;
use crate::geom::{Sym2, Vec2};
use crate::scalar::Scalar;

use super::Particle;

/// Velocity statistics of the particles in one cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellDynamics<T: Scalar = f64> {
    pub velocity: Vec2<T>,
    pub covariance: Sym2<T>,
    pub age_mean: T,
    pub is_dynamic: bool,
    /// The covariance was singular and had `covariance_epsilon` added.
    pub regularized: bool,
}

/// Weighted velocity mean and covariance of `particles` (all from one cell).
///
/// The cell is dynamic when `v̄ᵀ Σ⁻¹ v̄` exceeds the χ² threshold. Returns
/// `None` for an empty slice. Zero total weight falls back to equal weights.
pub fn cell_dynamics<'a, T: Scalar>(
    particles: impl IntoIterator<Item = &'a Particle<T>>,
    cfg: &ParticleConfig<T>,
) -> Option<CellDynamics<T>> {
    let ps: Vec<&Particle<T>> = particles.into_iter().collect();
    if ps.is_empty() {
        return None;
    }
    let total = ps.iter().fold(T::zero(), |s, p| s + p.weight);
    let uniform = !(total > T::zero());
    let w = |p: &Particle<T>| {
        if uniform {
            T::one() / T::from_count(ps.len())
        } else {
            p.weight / total
        }
    };

    let mut mean = Vec2::zero();
    let mut age = T::zero();
    for p in &ps {
        mean += p.velocity.scale(w(p));
        age += w(p) * T::from_count(p.resample_count as usize);
    }
    let mut cov = Sym2::zero();
    for p in &ps {
        let d = p.velocity - mean;
        let wi = w(p);
        cov.xx += wi * d.x * d.x;
        cov.xy += wi * d.x * d.y;
        cov.yy += wi * d.y * d.y;
    }

    let (q, regularized) = match cov.inverse_quadratic(mean) {
        Some(q) if cov.det() > cfg.covariance_epsilon * cfg.covariance_epsilon => (q, false),
        _ => {
            cov = cov.add_diagonal(cfg.covariance_epsilon);
            (cov.inverse_quadratic(mean).unwrap_or(T::infinity()), true)
        }
    };
    let is_dynamic = q > cfg.chi2_threshold;
    Some(CellDynamics {
        velocity: mean,
        covariance: cov,
        age_mean: age,
        is_dynamic,
        regularized,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(vx: f64, vy: f64, w: f64, n: u32) -> Particle<f64> {
        Particle {
            position: Vec2::zero(),
            velocity: Vec2::new(vx, vy),
            weight: w,
            resample_count: n,
        }
    }

    #[test]
    fn still_particles_are_static() {
        let ps = [p(0.0, 0.0, 1.0, 3), p(0.0, 0.0, 1.0, 3)];
        let d = cell_dynamics(&ps, &ParticleConfig::default()).unwrap();
        assert!(!d.is_dynamic);
        assert!(d.regularized);
        assert_eq!(d.age_mean, 3.0);
    }

    #[test]
    fn unit_covariance_mean_five() {
        // four symmetric samples around (5,0) with unit covariance
        let ps = [
            p(4.0, 0.0, 1.0, 0),
            p(6.0, 0.0, 1.0, 0),
            p(5.0, 1.0, 1.0, 0),
            p(5.0, -1.0, 1.0, 0),
        ];
        let d = cell_dynamics(&ps, &ParticleConfig::default()).unwrap();
        assert_eq!(d.velocity, Vec2::new(5.0, 0.0));
        assert!((d.covariance.xx - 0.5).abs() < 1e-12);
        let cov = Sym2::<f64>::identity();
        let q = cov.inverse_quadratic(d.velocity).unwrap();
        assert!((q - 25.0).abs() < 1e-12 && q > 5.99);
        assert!(d.is_dynamic);
        assert!(!d.regularized);
    }

    #[test]
    fn single_particle_takes_regularized_path() {
        let d = cell_dynamics(&[p(3.0, 0.0, 0.5, 2)], &ParticleConfig::default()).unwrap();
        assert!(d.regularized);
        assert!(d.is_dynamic);
    }

    #[test]
    fn weights_shift_the_mean() {
        let ps = [p(0.0, 0.0, 3.0, 0), p(4.0, 0.0, 1.0, 4)];
        let d = cell_dynamics(&ps, &ParticleConfig::default()).unwrap();
        assert!((d.velocity.x - 1.0).abs() < 1e-12);
        assert!((d.age_mean - 1.0).abs() < 1e-12);
    }

    #[test]
    fn empty_cell_has_no_dynamics() {
        assert!(cell_dynamics::<f64>(&[], &ParticleConfig::default()).is_none());
    }
}
