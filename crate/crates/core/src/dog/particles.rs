use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::geom::Vec2;
use crate::grid::{CellGrid, CellIndex, GridGeometry, Masses};
use crate::scalar::{lit, Scalar};
use crate::scene::Violation;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Particle<T: Scalar = f64> {
    pub position: Vec2<T>,
    pub velocity: Vec2<T>,
    pub weight: T,
    /// Number of resampling steps this particle (or its ancestors) survived.
    pub resample_count: u32,
}

/// Particle filter settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "", deny_unknown_fields, default)]
pub struct ParticleConfig<T: Scalar = f64> {
    pub budget: usize,
    /// Std of the position noise added per frame (m).
    pub position_noise: T,
    /// Std of the velocity noise added per frame (m/s).
    pub velocity_noise: T,
    /// Share of the budget spawned as newborns each frame.
    pub newborn_fraction: T,
    /// Speed range of newborn particles (m/s); directions are uniform.
    pub newborn_speed: [T; 2],
    /// Cells above this occupied mass with no particles receive newborns.
    pub birth_threshold: T,
    /// Mahalanobis threshold above which a cell is dynamic.
    pub chi2_threshold: T,
    /// Added to the diagonal of a singular velocity covariance.
    pub covariance_epsilon: T,
}

impl<T: Scalar> Default for ParticleConfig<T> {
    fn default() -> Self {
        Self {
            budget: 20_000,
            position_noise: lit(0.05),
            velocity_noise: lit(0.3),
            newborn_fraction: lit(0.1),
            newborn_speed: [T::zero(), lit(20.0)],
            birth_threshold: lit(0.1),
            chi2_threshold: lit(5.99),
            covariance_epsilon: lit(1e-3),
        }
    }
}

impl<T: Scalar> ParticleConfig<T> {
    pub fn validate(&self, path: &str, out: &mut Vec<Violation>) {
        if self.budget == 0 {
            out.push(Violation::new(format!("{path}.budget"), "must be positive"));
        }
        for (name, v) in [
            ("position_noise", self.position_noise),
            ("velocity_noise", self.velocity_noise),
            ("covariance_epsilon", self.covariance_epsilon),
            ("chi2_threshold", self.chi2_threshold),
        ] {
            if !(v >= T::zero()) || !v.is_finite() {
                out.push(Violation::new(format!("{path}.{name}"), "must be finite and non-negative"));
            }
        }
        if !(self.newborn_fraction >= T::zero() && self.newborn_fraction <= T::one()) {
            out.push(Violation::new(format!("{path}.newborn_fraction"), "must lie in [0, 1]"));
        }
        let [lo, hi] = self.newborn_speed;
        if !(lo >= T::zero() && lo <= hi) {
            out.push(Violation::new(
                format!("{path}.newborn_speed"),
                "must be a non-negative range [lo, hi] with lo <= hi",
            ));
        }
        if !(self.birth_threshold >= T::zero() && self.birth_threshold < T::one()) {
            out.push(Violation::new(format!("{path}.birth_threshold"), "must lie in [0, 1)"));
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParticleSet<T: Scalar = f64> {
    pub particles: Vec<Particle<T>>,
}

/// Particles grouped by grid cell, in particle order within each cell.
#[derive(Debug, Clone)]
pub struct CellBuckets {
    offsets: Vec<usize>,
    members: Vec<usize>,
}

impl CellBuckets {
    pub fn build<T: Scalar>(set: &ParticleSet<T>, geom: &GridGeometry<T>) -> Self {
        let n = geom.len();
        let cells: Vec<Option<usize>> = set
            .particles
            .iter()
            .map(|p| geom.world_to_cell(p.position).map(|c| geom.linear(c)))
            .collect();
        let mut offsets = vec![0usize; n + 1];
        for c in cells.iter().flatten() {
            offsets[c + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut members = vec![0usize; offsets[n]];
        for (i, c) in cells.iter().enumerate() {
            if let Some(c) = *c {
                members[fill[c]] = i;
                fill[c] += 1;
            }
        }
        Self { offsets, members }
    }

    /// Indices of the particles in linear cell `cell`.
    pub fn cell(&self, cell: usize) -> &[usize] {
        &self.members[self.offsets[cell]..self.offsets[cell + 1]]
    }
}

impl<T: Scalar> ParticleSet<T> {
    pub fn new() -> Self {
        Self { particles: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.particles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.particles.is_empty()
    }

    /// Drops particles outside `geom`.
    pub fn cull(&mut self, geom: &GridGeometry<T>) {
        self.particles.retain(|p| geom.world_to_cell(p.position).is_some());
    }

    /// Total particle weight per cell.
    pub fn cell_weights(&self, geom: &GridGeometry<T>) -> CellGrid<T> {
        let mut out = CellGrid::filled(geom.width(), geom.height(), T::zero());
        for p in &self.particles {
            if let Some(c) = geom.world_to_cell(p.position) {
                *out.get_mut(c) += p.weight;
            }
        }
        out
    }
}

fn normal<T: Scalar, R: Rng + ?Sized>(rng: &mut R, std: T) -> T {
    let z: f64 = StandardNormal.sample(rng);
    T::lit(z) * std
}

/// Moves every particle by `velocity·dt` plus noise, perturbs its velocity,
/// and culls particles that leave `geom`.
pub fn predict_particles<T: Scalar, R: Rng + ?Sized>(
    set: &mut ParticleSet<T>,
    dt: T,
    cfg: &ParticleConfig<T>,
    geom: &GridGeometry<T>,
    rng: &mut R,
) {
    for p in &mut set.particles {
        let dp = Vec2::new(normal(rng, cfg.position_noise), normal(rng, cfg.position_noise));
        p.position = p.position + p.velocity.scale(dt) + dp;
        let dv = Vec2::new(normal(rng, cfg.velocity_noise), normal(rng, cfg.velocity_noise));
        p.velocity += dv;
    }
    set.cull(geom);
}

fn newborn<T: Scalar, R: Rng + ?Sized>(
    geom: &GridGeometry<T>,
    cell: CellIndex,
    cfg: &ParticleConfig<T>,
    rng: &mut R,
) -> Particle<T> {
    let corner = geom.cell_corner(cell);
    let cs = geom.cell_size();
    let fx: f64 = rng.random();
    let fy: f64 = rng.random();
    let speed_u: f64 = rng.random();
    let heading: f64 = rng.random::<f64>() * std::f64::consts::TAU;
    let [lo, hi] = cfg.newborn_speed;
    let speed = lo + (hi - lo) * T::lit(speed_u);
    Particle {
        position: corner + Vec2::new(T::lit(fx) * cs, T::lit(fy) * cs),
        velocity: Vec2::from_angle(T::lit(heading)).scale(speed),
        weight: T::zero(),
        resample_count: 0,
    }
}

/// Ties particle weights to the posterior occupied mass and resamples.
///
/// The particles of each cell are scaled so their weights sum to the cell's
/// `m_occ`. Cells with `m_occ > birth_threshold` and no particle receive
/// newborns, together about `newborn_fraction·budget` and at least one per
/// cell. Systematic resampling then draws `budget` particles; drawn
/// particles that existed before this step have their resample count
/// incremented while newborns start at zero. Finally weights are
/// renormalized per cell to `m_occ` again.
pub fn update_weights_and_resample<T: Scalar, R: Rng + ?Sized>(
    set: &mut ParticleSet<T>,
    masses: &CellGrid<Masses<T>>,
    geom: &GridGeometry<T>,
    cfg: &ParticleConfig<T>,
    rng: &mut R,
) {
    let buckets = CellBuckets::build(set, geom);
    for cell in 0..geom.len() {
        let members = buckets.cell(cell);
        if members.is_empty() {
            continue;
        }
        let m_occ = masses.as_slice()[cell].occ;
        let sum = members
            .iter()
            .fold(T::zero(), |s, &i| s + set.particles[i].weight);
        let n = T::from_count(members.len());
        for &i in members {
            let p = &mut set.particles[i];
            p.weight = if sum > T::zero() {
                p.weight / sum * m_occ
            } else {
                m_occ / n
            };
        }
    }

    let birth_cells: Vec<usize> = (0..geom.len())
        .filter(|&c| buckets.cell(c).is_empty() && masses.as_slice()[c].occ > cfg.birth_threshold)
        .collect();
    let existing = set.particles.len();
    if !birth_cells.is_empty() {
        let total = (cfg.newborn_fraction * T::from_count(cfg.budget))
            .round()
            .to_usize()
            .unwrap_or(0);
        let per_cell = (total / birth_cells.len()).max(1);
        for &c in &birth_cells {
            let cell = geom.from_linear(c);
            let w = masses.as_slice()[c].occ / T::from_count(per_cell);
            for _ in 0..per_cell {
                let mut p = newborn(geom, cell, cfg, rng);
                p.weight = w;
                set.particles.push(p);
            }
        }
    }

    let total: T = set.particles.iter().fold(T::zero(), |s, p| s + p.weight);
    if !(total > T::zero()) || cfg.budget == 0 {
        set.particles.clear();
        return;
    }
    let step = total / T::from_count(cfg.budget);
    let u0: f64 = rng.random();
    let mut target = step * T::lit(u0);
    let mut acc = T::zero();
    let mut out = Vec::with_capacity(cfg.budget);
    let mut i = 0;
    while out.len() < cfg.budget && i < set.particles.len() {
        acc += set.particles[i].weight;
        while out.len() < cfg.budget && target < acc {
            let mut p = set.particles[i];
            if i < existing {
                p.resample_count += 1;
            }
            out.push(p);
            target += step;
        }
        i += 1;
    }
    // rounding can leave the tail short by a draw
    while out.len() < cfg.budget {
        let last = set.particles.iter().rposition(|p| p.weight > T::zero()).unwrap_or(0);
        let mut p = set.particles[last];
        if last < existing {
            p.resample_count += 1;
        }
        out.push(p);
    }
    set.particles = out;

    let buckets = CellBuckets::build(set, geom);
    for cell in 0..geom.len() {
        let members = buckets.cell(cell);
        if members.is_empty() {
            continue;
        }
        let w = masses.as_slice()[cell].occ / T::from_count(members.len());
        for &i in members {
            set.particles[i].weight = w;
        }
    }
}
