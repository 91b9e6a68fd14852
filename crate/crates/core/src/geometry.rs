//! Planar vector type shared by every module.
//!
//! All planning and simulation in this crate happens in a single world
//! frame projected onto the walking surface, so a 2D vector with `f64`
//! components covers positions (m), velocities (m/s) and forces (N).

use serde::{Deserialize, Serialize};
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

/// A 2D vector in the world frame. Unit depends on context (m, m/s, N).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PlanarVec {
    pub x: f64,
    pub y: f64,
}

impl PlanarVec {
    pub const ZERO: PlanarVec = PlanarVec { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Both components are finite (no NaN or infinity).
    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dot(&self, other: PlanarVec) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// Rotate counter-clockwise by `angle` radians.
    pub fn rotated(&self, angle: f64) -> PlanarVec {
        let (s, c) = angle.sin_cos();
        PlanarVec::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    /// Componentwise minimum.
    pub fn min(&self, other: PlanarVec) -> PlanarVec {
        PlanarVec::new(self.x.min(other.x), self.y.min(other.y))
    }

    /// Componentwise maximum.
    pub fn max(&self, other: PlanarVec) -> PlanarVec {
        PlanarVec::new(self.x.max(other.x), self.y.max(other.y))
    }
}

impl Add for PlanarVec {
    type Output = PlanarVec;
    fn add(self, rhs: PlanarVec) -> PlanarVec {
        PlanarVec::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl AddAssign for PlanarVec {
    fn add_assign(&mut self, rhs: PlanarVec) {
        self.x += rhs.x;
        self.y += rhs.y;
    }
}

impl Sub for PlanarVec {
    type Output = PlanarVec;
    fn sub(self, rhs: PlanarVec) -> PlanarVec {
        PlanarVec::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl SubAssign for PlanarVec {
    fn sub_assign(&mut self, rhs: PlanarVec) {
        self.x -= rhs.x;
        self.y -= rhs.y;
    }
}

impl Neg for PlanarVec {
    type Output = PlanarVec;
    fn neg(self) -> PlanarVec {
        PlanarVec::new(-self.x, -self.y)
    }
}

impl Mul<f64> for PlanarVec {
    type Output = PlanarVec;
    fn mul(self, rhs: f64) -> PlanarVec {
        PlanarVec::new(self.x * rhs, self.y * rhs)
    }
}

impl Mul<PlanarVec> for f64 {
    type Output = PlanarVec;
    fn mul(self, rhs: PlanarVec) -> PlanarVec {
        rhs * self
    }
}

impl Div<f64> for PlanarVec {
    type Output = PlanarVec;
    fn div(self, rhs: f64) -> PlanarVec {
        PlanarVec::new(self.x / rhs, self.y / rhs)
    }
}
