//! Small planar/spatial vector types and angle helpers.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::scalar::{lit, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(bound = "")]
#[serde(from = "[T; 2]", into = "[T; 2]")]
pub struct Vec2<T: Scalar> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Vec2<T> {
    #[inline]
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero())
    }

    /// Unit vector pointing along `angle` (radians, counter-clockwise from +x).
    #[inline]
    pub fn from_angle(angle: T) -> Self {
        Self::new(angle.cos(), angle.sin())
    }

    #[inline]
    pub fn dot(self, o: Self) -> T {
        self.x * o.x + self.y * o.y
    }

    #[inline]
    pub fn cross(self, o: Self) -> T {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm(self) -> T {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn norm_sq(self) -> T {
        self.dot(self)
    }

    /// Heading of the vector in (-π, π].
    #[inline]
    pub fn angle(self) -> T {
        self.y.atan2(self.x)
    }

    #[inline]
    pub fn scale(self, s: T) -> Self {
        Self::new(self.x * s, self.y * s)
    }

    /// Rotates counter-clockwise by `angle` radians.
    pub fn rotate(self, angle: T) -> Self {
        let (s, c) = angle.sin_cos();
        Self::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn cast<U: Scalar>(self) -> Vec2<U> {
        Vec2::new(U::lit(self.x.as_f64()), U::lit(self.y.as_f64()))
    }
}

impl<T: Scalar> From<[T; 2]> for Vec2<T> {
    fn from(a: [T; 2]) -> Self {
        Self::new(a[0], a[1])
    }
}

impl<T: Scalar> From<Vec2<T>> for [T; 2] {
    fn from(v: Vec2<T>) -> Self {
        [v.x, v.y]
    }
}

impl<T: Scalar> Add for Vec2<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }
}

impl<T: Scalar> AddAssign for Vec2<T> {
    fn add_assign(&mut self, o: Self) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl<T: Scalar> Sub for Vec2<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }
}

impl<T: Scalar> Neg for Vec2<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

impl<T: Scalar> Mul<T> for Vec2<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        self.scale(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct Vec3<T: Scalar> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Scalar> Vec3<T> {
    #[inline]
    pub fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    #[inline]
    pub fn xy(self) -> Vec2<T> {
        Vec2::new(self.x, self.y)
    }
}

/// Symmetric 2×2 matrix stored as `[xx, xy, yy]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct Sym2<T: Scalar> {
    pub xx: T,
    pub xy: T,
    pub yy: T,
}

impl<T: Scalar> Sym2<T> {
    pub fn new(xx: T, xy: T, yy: T) -> Self {
        Self { xx, xy, yy }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    pub fn identity() -> Self {
        Self::new(T::one(), T::zero(), T::one())
    }

    pub fn det(&self) -> T {
        self.xx * self.yy - self.xy * self.xy
    }

    pub fn add_diagonal(&self, eps: T) -> Self {
        Self::new(self.xx + eps, self.xy, self.yy + eps)
    }

    /// `vᵀ·M⁻¹·v`, or `None` when the matrix is not invertible.
    pub fn inverse_quadratic(&self, v: Vec2<T>) -> Option<T> {
        let det = self.det();
        if det.abs() <= T::epsilon() || !det.is_finite() {
            return None;
        }
        // inverse of [[a b][b c]] is 1/det [[c -b][-b a]]
        let q = (self.yy * v.x * v.x - lit::<T>(2.0) * self.xy * v.x * v.y + self.xx * v.y * v.y)
            / det;
        Some(q)
    }
}

/// Wraps an angle (radians) into (-π, π].
pub fn wrap_angle<T: Scalar>(a: T) -> T {
    let two_pi = T::TAU();
    let mut r = a % two_pi;
    if r <= -T::PI() {
        r += two_pi;
    } else if r > T::PI() {
        r -= two_pi;
    }
    r
}

/// Absolute angular difference folded into [0, π].
pub fn angle_diff_abs<T: Scalar>(a: T, b: T) -> T {
    wrap_angle(a - b).abs()
}
