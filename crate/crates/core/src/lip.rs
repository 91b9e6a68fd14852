//! Linear-inverted-pendulum model parameters and the planar DCM dynamics.
//!
//! The robot is reduced to a point mass at constant height `z0`. Its state
//! is carried by the center of mass `x` and the divergent component of
//! motion `xi = x + b*xdot`, with `b = sqrt(z0/g)` the pendulum time
//! constant. The DCM obeys the first-order unstable dynamics
//!
//! ```text
//! xi_dot = (xi - r_vrp) / b + (b/m) * f_ext
//! ```
//!
//! and the CoM follows the stable dynamics `x_dot = (xi - x) / b`.

use crate::geometry::PlanarVec;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("mass must be positive, got {0}")]
    NonPositiveMass(f64),
    #[error("CoM height must be positive, got {0}")]
    NonPositiveHeight(f64),
    #[error("gravity must be positive, got {0}")]
    NonPositiveGravity(f64),
}

/// Physical parameters of the reduced model.
///
/// The time constant is always derived from `com_height` and `gravity`
/// so it can never drift out of sync with them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LipParams {
    /// Total robot mass (kg).
    pub mass: f64,
    /// Constant CoM height above the walking surface (m).
    pub com_height: f64,
    /// Gravitational acceleration (m/s^2).
    pub gravity: f64,
}

impl LipParams {
    pub fn new(mass: f64, com_height: f64, gravity: f64) -> Result<Self, ModelError> {
        if !(mass > 0.0) {
            return Err(ModelError::NonPositiveMass(mass));
        }
        if !(com_height > 0.0) {
            return Err(ModelError::NonPositiveHeight(com_height));
        }
        if !(gravity > 0.0) {
            return Err(ModelError::NonPositiveGravity(gravity));
        }
        Ok(Self {
            mass,
            com_height,
            gravity,
        })
    }

    /// Build parameters from a desired time constant instead of a height
    /// (`z0 = b^2 * g`). Convenient when a test pins `b` directly.
    pub fn from_time_constant(b: f64, gravity: f64, mass: f64) -> Result<Self, ModelError> {
        Self::new(mass, b * b * gravity, gravity)
    }

    /// Pendulum time constant `b = sqrt(z0/g)` (s). Recomputed on demand,
    /// never stored.
    pub fn time_constant(&self) -> f64 {
        (self.com_height / self.gravity).sqrt()
    }
}

impl Default for LipParams {
    /// 33 kg robot with a 0.53 m CoM height (b ~ 0.2325 s).
    fn default() -> Self {
        Self {
            mass: 33.0,
            com_height: 0.53,
            gravity: 9.81,
        }
    }
}

/// Reduced-model kinematic state: DCM and CoM positions.
///
/// The CoM velocity is always `(xi - com)/b`; it is derived, not stored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DcmState {
    /// Divergent component of motion (m).
    pub xi: PlanarVec,
    /// Center of mass position (m).
    pub com: PlanarVec,
}

impl DcmState {
    pub fn new(xi: PlanarVec, com: PlanarVec) -> Self {
        Self { xi, com }
    }

    /// Equilibrium state with DCM and CoM at the same point.
    pub fn at_rest(point: PlanarVec) -> Self {
        Self {
            xi: point,
            com: point,
        }
    }
}

/// DCM time derivative under a commanded VRP and an external force:
/// `(xi - vrp)/b + (b/m) * f_ext`.
pub fn dcm_rate(xi: PlanarVec, vrp: PlanarVec, params: &LipParams, f_ext: PlanarVec) -> PlanarVec {
    let b = params.time_constant();
    (xi - vrp) / b + f_ext * (b / params.mass)
}

/// CoM velocity recovered from the DCM definition: `(xi - com)/b`.
pub fn com_rate(state: &DcmState, params: &LipParams) -> PlanarVec {
    (state.xi - state.com) / params.time_constant()
}
