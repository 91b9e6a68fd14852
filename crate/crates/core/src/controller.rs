//! Simplified-model DCM tracking control.
//!
//! The control law `r_vrp = xi_ref - b xi_dot_ref + K (xi - xi_ref)`
//! placed into the DCM dynamics gives the closed-loop error dynamics
//! `e_dot = (I - K) e / b`, asymptotically stable for `K > I`.

use crate::geometry::PlanarVec;
use crate::lip::LipParams;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ControllerError {
    #[error("DCM gain entries must exceed 1 for stability, got {0}")]
    GainTooSmall(f64),
}

/// Diagonal DCM feedback gain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControllerGains {
    /// Diagonal entries of the planar gain matrix.
    pub k_xi: [f64; 2],
}

impl ControllerGains {
    pub fn new(kx: f64, ky: f64) -> Result<Self, ControllerError> {
        for k in [kx, ky] {
            if !(k > 1.0) {
                return Err(ControllerError::GainTooSmall(k));
            }
        }
        Ok(Self { k_xi: [kx, ky] })
    }

    pub fn validate(&self) -> Result<(), ControllerError> {
        Self::new(self.k_xi[0], self.k_xi[1]).map(|_| ())
    }
}

impl Default for ControllerGains {
    fn default() -> Self {
        Self { k_xi: [2.0, 2.0] }
    }
}

/// Desired VRP from the DCM reference and the measured DCM.
pub fn vrp_command(
    xi: PlanarVec,
    xi_ref: PlanarVec,
    xi_dot_ref: PlanarVec,
    gains: &ControllerGains,
    params: &LipParams,
) -> PlanarVec {
    let b = params.time_constant();
    let err = xi - xi_ref;
    xi_ref - xi_dot_ref * b
        + PlanarVec::new(gains.k_xi[0] * err.x, gains.k_xi[1] * err.y)
}

/// Desired planar CoM acceleration toward the commanded VRP:
/// `(com - r_vrp) / b^2`.
pub fn com_acc_command(com: PlanarVec, vrp_des: PlanarVec, params: &LipParams) -> PlanarVec {
    let b = params.time_constant();
    (com - vrp_des) / (b * b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lip::dcm_rate;

    fn params() -> LipParams {
        LipParams::from_time_constant(0.2325, 9.81, 33.0).unwrap()
    }

    #[test]
    fn zero_error_stationary_reference() {
        let p = params();
        let gains = ControllerGains::default();
        let xi = PlanarVec::new(0.1, -0.2);
        let vrp = vrp_command(xi, xi, PlanarVec::ZERO, &gains, &p);
        assert!((vrp - xi).norm() < 1e-15);
    }

    #[test]
    fn zero_error_moving_reference_is_feedforward() {
        let p = params();
        let b = p.time_constant();
        let gains = ControllerGains::default();
        let xi_ref = PlanarVec::new(0.1, 0.0);
        let xi_dot_ref = PlanarVec::new(0.3, -0.1);
        let vrp = vrp_command(xi_ref, xi_ref, xi_dot_ref, &gains, &p);
        assert!((vrp - (xi_ref - xi_dot_ref * b)).norm() < 1e-15);
    }

    #[test]
    fn error_term_scales_with_gain() {
        let p = params();
        let gains = ControllerGains::new(2.0, 2.0).unwrap();
        let xi_ref = PlanarVec::new(0.05, 0.05);
        let xi = xi_ref + PlanarVec::new(0.01, 0.0);
        let vrp = vrp_command(xi, xi_ref, PlanarVec::ZERO, &gains, &p);
        assert!((vrp - xi_ref - PlanarVec::new(0.02, 0.0)).norm() < 1e-15);

        // Plugging the command into the DCM dynamics: the error derivative
        // must be -(k-1)/b * error.
        let b = p.time_constant();
        let err = xi - xi_ref;
        let rate = dcm_rate(xi, vrp, &p, PlanarVec::ZERO);
        let expected = err * (-(2.0 - 1.0) / b);
        assert!((rate - expected).norm() < 1e-12);
    }

    #[test]
    fn com_acceleration_values() {
        let p = params();
        let a = com_acc_command(PlanarVec::new(0.05, 0.0), PlanarVec::ZERO, &p);
        assert!((a.x - 0.05 / (0.2325 * 0.2325)).abs() < 1e-12);
        assert!((a.x - 0.925).abs() < 2e-3);
        assert_eq!(a.y, 0.0);
        assert_eq!(
            com_acc_command(PlanarVec::new(0.1, 0.1), PlanarVec::new(0.1, 0.1), &p),
            PlanarVec::ZERO
        );

        // m * com_acc equals the desired linear momentum rate.
        let m = p.mass;
        let h_dot = a * m;
        assert!((h_dot.x - m / (0.2325f64 * 0.2325) * 0.05).abs() < 1e-9);
    }

    #[test]
    fn gain_validation() {
        assert!(ControllerGains::new(1.0, 2.0).is_err());
        assert!(ControllerGains::new(2.0, 0.5).is_err());
        assert!(ControllerGains::new(1.5, 3.0).is_ok());
    }

    #[test]
    fn closed_loop_decay_rate_matches_theory() {
        // Simulate xi_dot = (xi - vrp_cmd)/b with a constant reference and
        // fit the exponential decay of the error norm.
        let p = params();
        let b = p.time_constant();
        for k in [1.5, 2.0, 3.0] {
            let gains = ControllerGains::new(k, k).unwrap();
            let xi_ref = PlanarVec::new(0.02, -0.03);
            let mut xi = xi_ref + PlanarVec::new(0.05, 0.04);
            let e0 = (xi - xi_ref).norm();
            let dt = 1e-4;
            let horizon = 0.25;
            let steps = (horizon / dt) as usize;
            for _ in 0..steps {
                let f = |x: PlanarVec| {
                    let vrp = vrp_command(x, xi_ref, PlanarVec::ZERO, &gains, &p);
                    dcm_rate(x, vrp, &p, PlanarVec::ZERO)
                };
                let k1 = f(xi);
                let k2 = f(xi + k1 * (dt / 2.0));
                let k3 = f(xi + k2 * (dt / 2.0));
                let k4 = f(xi + k3 * dt);
                xi += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
            }
            let e1 = (xi - xi_ref).norm();
            let fitted = (e0 / e1).ln() / horizon;
            let expected = (k - 1.0) / b;
            assert!(
                (fitted - expected).abs() / expected < 0.05,
                "k={k}: fitted {fitted}, expected {expected}"
            );
        }
    }

    #[test]
    fn zero_error_vrp_reproduces_plan_zmp() {
        // Tracking a planner reference exactly, the commanded VRP during
        // single support equals the plan's own reconstructed ZMP.
        use crate::dcm_plan::build_plan;
        use crate::footstep::{plan_footsteps, sample_unicycle, PathSpec, UnicycleParams};
        let p = params();
        let up = UnicycleParams::default();
        let samples = sample_unicycle(
            &PathSpec::StraightLine {
                length: 1.0,
                speed: 0.28,
            },
            &up,
        )
        .unwrap();
        let steps = plan_footsteps(&samples, &up).unwrap();
        let plan = build_plan(&steps, 0.106, &p).unwrap();
        let gains = ControllerGains::default();
        let mut t = 0.05;
        while t < plan.end_time() {
            let s = plan.sample(t, &p);
            let vrp = vrp_command(s.xi, s.xi, s.xi_dot, &gains, &p);
            assert!(
                (vrp - s.zmp).norm() < 1e-9,
                "vrp deviates from plan zmp at t={t}"
            );
            t += 0.03;
        }
    }
}
