//! Minimal 2D vector and 2x2 matrix types.
//!
//! The whole artifact lives in the plane, so a hand-rolled pair of types is
//! lighter than pulling in a linear-algebra crate and keeps the core
//! `no_std`-friendly.

use core::ops::{Add, Div, Mul, Neg, Sub};

use crate::math;

/// A point or displacement in the workspace plane.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    #[inline]
    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// 2D cross product `self.x * other.y - self.y * other.x`.
    #[inline]
    pub fn cross(self, other: Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    #[inline]
    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        math::hypot(self.x, self.y)
    }

    /// Counter-clockwise rotation by 90 degrees (left normal direction).
    #[inline]
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    #[inline]
    pub fn distance(self, other: Vec2) -> f64 {
        (self - other).norm()
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    #[inline]
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    #[inline]
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn mul(self, rhs: f64) -> Vec2 {
        Vec2::new(self.x * rhs, self.y * rhs)
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;
    #[inline]
    fn mul(self, rhs: Vec2) -> Vec2 {
        rhs * self
    }
}

impl Div<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn div(self, rhs: f64) -> Vec2 {
        Vec2::new(self.x / rhs, self.y / rhs)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    #[inline]
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// A 2x2 matrix in row-major order.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2 {
    pub m11: f64,
    pub m12: f64,
    pub m21: f64,
    pub m22: f64,
}

impl Mat2 {
    #[inline]
    pub const fn new(m11: f64, m12: f64, m21: f64, m22: f64) -> Self {
        Mat2 { m11, m12, m21, m22 }
    }

    #[inline]
    pub const fn identity() -> Self {
        Mat2::new(1.0, 0.0, 0.0, 1.0)
    }

    #[inline]
    pub const fn diagonal(a: f64, b: f64) -> Self {
        Mat2::new(a, 0.0, 0.0, b)
    }

    /// `s * I`, the isotropic covariance used throughout the benchmark.
    #[inline]
    pub const fn isotropic(s: f64) -> Self {
        Mat2::diagonal(s, s)
    }

    #[inline]
    pub fn det(self) -> f64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    #[inline]
    pub fn mul_vec(self, v: Vec2) -> Vec2 {
        Vec2::new(self.m11 * v.x + self.m12 * v.y, self.m21 * v.x + self.m22 * v.y)
    }

    #[inline]
    pub fn add(self, other: Mat2) -> Mat2 {
        Mat2::new(
            self.m11 + other.m11,
            self.m12 + other.m12,
            self.m21 + other.m21,
            self.m22 + other.m22,
        )
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.m11.is_finite() && self.m12.is_finite() && self.m21.is_finite() && self.m22.is_finite()
    }

    /// Symmetry check with an absolute tolerance scaled to the entries.
    pub fn is_symmetric(self) -> bool {
        let scale = math::abs(self.m11).max(math::abs(self.m22)).max(1e-300);
        math::abs(self.m12 - self.m21) <= 1e-12 * scale
    }

    /// Positive definiteness of a symmetric 2x2 matrix (Sylvester).
    pub fn is_positive_definite(self) -> bool {
        self.m11 > 0.0 && self.det() > 0.0
    }

    pub fn inverse(self) -> Option<Mat2> {
        let d = self.det();
        if d == 0.0 || !d.is_finite() {
            return None;
        }
        Some(Mat2::new(self.m22 / d, -self.m12 / d, -self.m21 / d, self.m11 / d))
    }

    /// Lower-triangular Cholesky factor `L` with `L L^T = self`.
    ///
    /// Requires a symmetric positive definite input; returns `None` otherwise.
    pub fn cholesky(self) -> Option<Mat2> {
        if !self.is_symmetric() || !self.is_positive_definite() {
            return None;
        }
        let l11 = math::sqrt(self.m11);
        let l21 = self.m21 / l11;
        let rest = self.m22 - l21 * l21;
        if rest <= 0.0 {
            return None;
        }
        Some(Mat2::new(l11, 0.0, l21, math::sqrt(rest)))
    }
}
