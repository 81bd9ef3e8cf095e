use serde::{Deserialize, Serialize};

use crate::geom::{Sym2, Vec2};
use crate::scalar::{lit, Scalar};

/// Dempster-Shafer masses over `{occupied, free}`; the unknown mass is implied.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct Masses<T: Scalar = f64> {
    pub occ: T,
    pub free: T,
}

impl<T: Scalar> Masses<T> {
    pub fn new(occ: T, free: T) -> Self {
        Self { occ, free }
    }

    /// All belief on Ω.
    pub fn vacuous() -> Self {
        Self::new(T::zero(), T::zero())
    }

    #[inline]
    pub fn unknown(&self) -> T {
        T::one() - self.occ - self.free
    }

    /// Non-negative masses summing to at most one, within `tol`.
    pub fn is_valid(&self, tol: T) -> bool {
        self.occ.is_finite()
            && self.free.is_finite()
            && self.occ >= -tol
            && self.free >= -tol
            && self.occ + self.free <= T::one() + tol
    }
}

impl<T: Scalar> Default for Masses<T> {
    fn default() -> Self {
        Self::vacuous()
    }
}

/// Lowest and highest rasterized point heights of a cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct HeightSpan<T: Scalar = f64> {
    pub min: T,
    pub max: T,
}

impl<T: Scalar> HeightSpan<T> {
    pub fn point(z: T) -> Self {
        Self { min: z, max: z }
    }

    pub fn include(&mut self, z: T) {
        self.min = self.min.min(z);
        self.max = self.max.max(z);
    }

    pub fn merge(self, other: Self) -> Self {
        Self {
            min: self.min.min(other.min),
            max: self.max.max(other.max),
        }
    }
}

/// Everything the occupancy grid stores for one cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct CellState<T: Scalar = f64> {
    pub masses: Masses<T>,
    pub heights: Option<HeightSpan<T>>,
    pub velocity: Vec2<T>,
    pub velocity_cov: Sym2<T>,
    /// Weight-weighted mean resample count of the particles in the cell.
    pub particle_age_mean: T,
    pub particle_count: usize,
    pub is_dynamic: bool,
    pub observed_this_frame: bool,
}

impl<T: Scalar> CellState<T> {
    /// Cell with no evidence at all.
    pub fn vacuous() -> Self {
        Self {
            masses: Masses::vacuous(),
            heights: None,
            velocity: Vec2::zero(),
            velocity_cov: Sym2::zero(),
            particle_age_mean: T::zero(),
            particle_count: 0,
            is_dynamic: false,
            observed_this_frame: false,
        }
    }

    /// Checks the per-cell invariants; returns a description of the first violation.
    pub fn check(&self) -> Result<(), String> {
        if !self.masses.is_valid(lit(1e-9)) {
            return Err(format!(
                "invalid masses occ={} free={}",
                self.masses.occ, self.masses.free
            ));
        }
        if let Some(h) = self.heights {
            if h.min > h.max {
                return Err(format!("h_min {} > h_max {}", h.min, h.max));
            }
        }
        if !(self.particle_age_mean >= T::zero()) {
            return Err(format!("negative particle age {}", self.particle_age_mean));
        }
        Ok(())
    }
}

impl<T: Scalar> Default for CellState<T> {
    fn default() -> Self {
        Self::vacuous()
    }
}
