use thiserror::Error;

use super::Scenario;
use crate::cg::{run_frame, CategorizedGrid, CgError, FovCache};
use crate::dog::{DogEngine, DogError};
use crate::scene::{classify_points, frame_rng, simulate_scan, SimError};

/// Random stream used by the point classifier.
pub const CLASSIFY_STREAM: u64 = 1;

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Dog(#[from] DogError),
    #[error(transparent)]
    Cg(#[from] CgError),
}

/// Drives a scenario frame by frame: simulate, classify, update the DOG,
/// categorize.
pub struct Runner<'a> {
    scenario: &'a Scenario,
    engine: DogEngine<f64>,
    fov: FovCache<f64>,
    seed: u64,
    next: usize,
}

impl<'a> Runner<'a> {
    pub fn new(scenario: &'a Scenario) -> Self {
        Self::with_seed(scenario, scenario.run.seed)
    }

    pub fn with_seed(scenario: &'a Scenario, seed: u64) -> Self {
        Self {
            scenario,
            engine: DogEngine::new(scenario.dog, scenario.geom, seed),
            fov: FovCache::new(),
            seed,
            next: 0,
        }
    }

    /// Index of the frame the next [`step`](Self::step) produces.
    pub fn next_frame(&self) -> usize {
        self.next
    }

    pub fn fov_cache(&self) -> &FovCache<f64> {
        &self.fov
    }

    pub fn step(&mut self) -> Result<CategorizedGrid<f64>, RunError> {
        let s = self.scenario;
        let frame = self.next;
        let scan = simulate_scan(&s.scene, frame, &s.lidar)?;
        let mut rng = frame_rng(self.seed, frame, CLASSIFY_STREAM);
        let points = classify_points(&scan.samples, s.run.ground_flip_rate, &mut rng);
        let dog = self.engine.step(&scan, &points, s.scene.frame_period)?;
        let maps = self
            .fov
            .get(&s.lidar, &dog.geom, dog.ego.heading(), &s.dog.model, &s.thresholds);
        let grid = run_frame(&dog, &scan.samples, maps, &s.dog.model, &s.thresholds)?;
        self.next += 1;
        Ok(grid)
    }
}
