//! Exponential ZMP interpolation over a single support phase and the
//! closed-form DCM trajectory it induces.
//!
//! A single support of duration `T` interpolates the ZMP between its
//! endpoints `r1`, `r2` as
//!
//! ```text
//! r_zmp(t) = A e^{-t/b} + B,      sigma = e^{T/b},
//! A = (r2 - r1) sigma / (1 - sigma),   B = (r1 - r2 sigma) / (1 - sigma),
//! ```
//!
//! under which the DCM dynamics admit the closed form
//!
//! ```text
//! xi(t) = (A/2) e^{-t/b} + B + C e^{t/b}.
//! ```
//!
//! Matching the initial- and final-value expressions for `C` couples the
//! boundary DCM values, the ZMP endpoints, and `sigma` through a relation
//! that is *linear* in all of them. That linearity is what lets the step
//! adapter pose footstep position, timing, and DCM offset as one QP; the
//! exponential's monotonicity keeps the interpolated ZMP inside the box
//! spanned by `r1` and `r2`.

use crate::geometry::PlanarVec;
use crate::lip::LipParams;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum InterpError {
    #[error("single support duration must be positive, got {0}")]
    NonPositiveDuration(f64),
    #[error("time {t} outside segment domain [0, {duration}]")]
    OutOfDomain { t: f64, duration: f64 },
}

/// One single-support ZMP segment with its interpolation coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpZmpSegment {
    /// ZMP at the start of the phase (m).
    pub r1: PlanarVec,
    /// ZMP at the end of the phase (m).
    pub r2: PlanarVec,
    /// Phase duration (s).
    pub duration: f64,
    /// Exponential coefficient of `r_zmp(t)`.
    pub a: PlanarVec,
    /// Constant coefficient of `r_zmp(t)`.
    pub b_coef: PlanarVec,
    /// `e^{T/b}` for this segment.
    pub sigma: f64,
    /// Pendulum time constant used to build the segment (s).
    pub time_constant: f64,
}

/// Closed-form DCM trajectory `xi(t) = (A/2) e^{-t/b} + B + C e^{t/b}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DcmClosedForm {
    pub a: PlanarVec,
    pub b_coef: PlanarVec,
    /// Integration constant fixed by the boundary condition.
    pub c: PlanarVec,
    /// Pendulum time constant (s).
    pub time_constant: f64,
}

impl DcmClosedForm {
    /// DCM position at time `t` since the phase start.
    pub fn eval(&self, t: f64) -> PlanarVec {
        let b = self.time_constant;
        self.a * (0.5 * (-t / b).exp()) + self.b_coef + self.c * (t / b).exp()
    }

    /// DCM velocity at time `t`.
    pub fn eval_rate(&self, t: f64) -> PlanarVec {
        let b = self.time_constant;
        self.a * (-0.5 / b * (-t / b).exp()) + self.c * ((t / b).exp() / b)
    }
}

/// Build the exponential ZMP segment between `r1` and `r2` over `T` seconds.
pub fn make_segment(
    r1: PlanarVec,
    r2: PlanarVec,
    duration: f64,
    params: &LipParams,
) -> Result<ExpZmpSegment, InterpError> {
    if !(duration > 0.0) {
        // sigma = 1 would make the coefficient denominators singular.
        return Err(InterpError::NonPositiveDuration(duration));
    }
    let b = params.time_constant();
    let sigma = (duration / b).exp();
    let denom = 1.0 - sigma;
    let a = (r2 - r1) * (sigma / denom);
    let b_coef = (r1 - r2 * sigma) / denom;
    Ok(ExpZmpSegment {
        r1,
        r2,
        duration,
        a,
        b_coef,
        sigma,
        time_constant: b,
    })
}

/// ZMP reference at time `t` within the segment.
pub fn eval_zmp(seg: &ExpZmpSegment, t: f64) -> Result<PlanarVec, InterpError> {
    if t < 0.0 || t > seg.duration {
        return Err(InterpError::OutOfDomain {
            t,
            duration: seg.duration,
        });
    }
    Ok(seg.a * (-t / seg.time_constant).exp() + seg.b_coef)
}

/// Solve the DCM dynamics under the segment's ZMP as an initial value
/// problem: `xi(0) = xi0` fixes the integration constant.
pub fn solve_dcm_ivp(seg: &ExpZmpSegment, xi0: PlanarVec) -> DcmClosedForm {
    let c0 = xi0 - seg.a * 0.5 - seg.b_coef;
    DcmClosedForm {
        a: seg.a,
        b_coef: seg.b_coef,
        c: c0,
        time_constant: seg.time_constant,
    }
}

/// DCM at the end of the segment, written directly in terms of the
/// boundary data:
///
/// ```text
/// xi_T = sigma * xi0 + (delta/2)(1 + sigma) + r1 - sigma * r2,
/// delta = r2 - r1.
/// ```
///
/// Identical to evaluating [`solve_dcm_ivp`] at `t = T`.
pub fn final_dcm(seg: &ExpZmpSegment, xi0: PlanarVec) -> PlanarVec {
    let delta = seg.r2 - seg.r1;
    xi0 * seg.sigma + delta * (0.5 * (1.0 + seg.sigma)) + seg.r1 - seg.r2 * seg.sigma
}

/// Residual of the boundary-coupling relation
///
/// ```text
/// gamma_T + r_T + (r2 - xi0 - delta/2) * sigma - r1 - delta/2,
/// ```
///
/// where `gamma_T = xi_T - r_T` is the DCM offset at the start of the
/// next step. Zero exactly when `(xi0, xi_T, sigma)` are dynamically
/// consistent under the exponential ZMP segment.
#[allow(clippy::too_many_arguments)]
pub fn coupling_residual(
    xi0: PlanarVec,
    r1: PlanarVec,
    r2: PlanarVec,
    r_t_zmp: PlanarVec,
    gamma_t: PlanarVec,
    sigma: f64,
) -> PlanarVec {
    let delta = r2 - r1;
    gamma_t + r_t_zmp + (r2 - xi0 - delta * 0.5) * sigma - r1 - delta * 0.5
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params_b(b: f64) -> LipParams {
        LipParams::from_time_constant(b, 9.81, 33.0).unwrap()
    }

    /// Test-side RK4 integrator for xi_dot = (xi - r_zmp(t))/b, independent
    /// of the closed form it checks.
    fn integrate_dcm_ode(seg: &ExpZmpSegment, xi0: PlanarVec, steps: usize) -> PlanarVec {
        let b = seg.time_constant;
        let dt = seg.duration / steps as f64;
        let zmp = |t: f64| seg.a * (-t / b).exp() + seg.b_coef;
        let f = |t: f64, xi: PlanarVec| (xi - zmp(t)) / b;
        let mut xi = xi0;
        let mut t = 0.0;
        for _ in 0..steps {
            let k1 = f(t, xi);
            let k2 = f(t + dt / 2.0, xi + k1 * (dt / 2.0));
            let k3 = f(t + dt / 2.0, xi + k2 * (dt / 2.0));
            let k4 = f(t + dt, xi + k3 * dt);
            xi += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
            t += dt;
        }
        xi
    }

    #[test]
    fn constant_zmp_segment() {
        let p = params_b(0.2325);
        let r = PlanarVec::new(0.07, -0.01);
        let seg = make_segment(r, r, 0.53, &p).unwrap();
        assert!((seg.a).norm() < 1e-15);
        assert!((seg.b_coef - r).norm() < 1e-15);
        for t in [0.0, 0.1, 0.3, 0.53] {
            assert!((eval_zmp(&seg, t).unwrap() - r).norm() < 1e-15);
        }
    }

    #[test]
    fn segment_coefficients_match_boundaries() {
        let p = params_b(0.2325);
        let r1 = PlanarVec::ZERO;
        let r2 = PlanarVec::new(0.1, 0.0);
        let seg = make_segment(r1, r2, 0.53, &p).unwrap();
        assert!((seg.sigma - 9.772).abs() < 1e-3);
        assert!((seg.a.x - (-0.11140)).abs() < 1e-4);
        assert!((seg.b_coef.x - 0.11140).abs() < 1e-4);
        // Boundary identities A + B = r1 and A/sigma + B = r2.
        assert!((seg.a + seg.b_coef - r1).norm() < 1e-12);
        assert!((seg.a / seg.sigma + seg.b_coef - r2).norm() < 1e-12);
        assert!((eval_zmp(&seg, 0.0).unwrap() - r1).norm() < 1e-12);
        assert!((eval_zmp(&seg, 0.53).unwrap() - r2).norm() < 1e-12);
    }

    #[test]
    fn zero_duration_rejected() {
        let p = params_b(0.2325);
        assert_eq!(
            make_segment(PlanarVec::ZERO, PlanarVec::new(0.1, 0.0), 0.0, &p),
            Err(InterpError::NonPositiveDuration(0.0))
        );
    }

    #[test]
    fn zmp_eval_domain_checked() {
        let p = params_b(0.2325);
        let seg = make_segment(PlanarVec::ZERO, PlanarVec::new(0.1, 0.0), 0.5, &p).unwrap();
        assert!(eval_zmp(&seg, -0.01).is_err());
        assert!(eval_zmp(&seg, 0.51).is_err());
    }

    #[test]
    fn zmp_monotone_between_endpoints() {
        let p = params_b(0.2325);
        let r1 = PlanarVec::new(-0.05, 0.2);
        let r2 = PlanarVec::new(0.15, -0.1);
        let seg = make_segment(r1, r2, 0.6, &p).unwrap();
        let mut prev = eval_zmp(&seg, 0.0).unwrap();
        let n = 500;
        for i in 1..=n {
            let t = seg.duration * i as f64 / n as f64;
            let cur = eval_zmp(&seg, t).unwrap();
            // x increases toward r2.x, y decreases toward r2.y.
            assert!(cur.x >= prev.x - 1e-12);
            assert!(cur.y <= prev.y + 1e-12);
            prev = cur;
        }
    }

    #[test]
    fn ivp_boundary_and_bounded_mode() {
        let p = params_b(0.2325);
        let r1 = PlanarVec::new(0.02, 0.0);
        let r2 = PlanarVec::new(0.12, 0.03);
        let seg = make_segment(r1, r2, 0.53, &p).unwrap();

        let xi0 = PlanarVec::new(0.04, 0.01);
        let cf = solve_dcm_ivp(&seg, xi0);
        assert!((cf.eval(0.0) - xi0).norm() < 1e-14);

        // xi0 = A/2 + B kills the divergent coefficient.
        let bounded0 = seg.a * 0.5 + seg.b_coef;
        let cf_bounded = solve_dcm_ivp(&seg, bounded0);
        assert!(cf_bounded.c.norm() < 1e-15);

        // delta = 0, xi0 = r1: equilibrium forever.
        let still = make_segment(r1, r1, 0.53, &p).unwrap();
        let cf_eq = solve_dcm_ivp(&still, r1);
        for t in [0.0, 0.2, 0.53] {
            assert!((cf_eq.eval(t) - r1).norm() < 1e-14);
            assert!(cf_eq.eval_rate(t).norm() < 1e-14);
        }
    }

    #[test]
    fn closed_form_matches_integrator() {
        let p = params_b(0.26);
        let seg = make_segment(
            PlanarVec::new(-0.1, 0.05),
            PlanarVec::new(0.2, -0.15),
            0.7,
            &p,
        )
        .unwrap();
        let xi0 = PlanarVec::new(-0.05, 0.0);
        let cf = solve_dcm_ivp(&seg, xi0);
        let numeric = integrate_dcm_ode(&seg, xi0, 700);
        assert!((cf.eval(seg.duration) - numeric).norm() < 1e-6);
    }

    #[test]
    fn final_dcm_special_cases() {
        let p = params_b(0.2325);
        let r = PlanarVec::new(0.03, -0.02);
        let still = make_segment(r, r, 0.53, &p).unwrap();
        assert!((final_dcm(&still, r) - r).norm() < 1e-14);

        // delta = 0, xi0 = 0.01, r = 0 -> sigma * xi0.
        let seg = make_segment(PlanarVec::ZERO, PlanarVec::ZERO, 0.53, &p).unwrap();
        let end = final_dcm(&seg, PlanarVec::new(0.01, 0.0));
        assert!((end.x - 0.01 * seg.sigma).abs() < 1e-12);
        assert!((end.x - 0.09772).abs() < 1e-4);
    }

    #[test]
    fn coupling_residual_detects_sigma_error() {
        let p = params_b(0.2325);
        let r1 = PlanarVec::new(0.0, 0.08);
        let r2 = PlanarVec::new(0.05, 0.08);
        let seg = make_segment(r1, r2, 0.53, &p).unwrap();
        let xi0 = PlanarVec::new(-0.02, 0.05);
        let xi_t = final_dcm(&seg, xi0);
        let r_t = PlanarVec::new(0.15, -0.08);
        let gamma_t = xi_t - r_t;

        let res = coupling_residual(xi0, r1, r2, r_t, gamma_t, seg.sigma);
        assert!(res.norm() < 1e-10);

        // Equilibrium instance.
        let still = make_segment(r1, r1, 0.53, &p).unwrap();
        let res_eq = coupling_residual(r1, r1, r1, r_t, r1 - r_t, still.sigma);
        assert!(res_eq.norm() < 1e-12);

        // Perturbing sigma breaks consistency.
        let res_bad = coupling_residual(xi0, r1, r2, r_t, gamma_t, seg.sigma + 0.1);
        assert!(res_bad.norm() > 1e-4);
    }

    proptest! {
        #[test]
        fn final_dcm_agrees_with_ivp_eval(
            r1x in -0.3f64..0.3, r1y in -0.3f64..0.3,
            r2x in -0.3f64..0.3, r2y in -0.3f64..0.3,
            x0 in -0.3f64..0.3, y0 in -0.3f64..0.3,
            duration in 0.2f64..1.0,
            b in 0.15f64..0.35,
        ) {
            let p = params_b(b);
            let seg = make_segment(
                PlanarVec::new(r1x, r1y),
                PlanarVec::new(r2x, r2y),
                duration,
                &p,
            ).unwrap();
            let xi0 = PlanarVec::new(x0, y0);
            let cf = solve_dcm_ivp(&seg, xi0);
            prop_assert!((final_dcm(&seg, xi0) - cf.eval(duration)).norm() < 1e-10);
        }

        #[test]
        fn initial_and_final_value_constants_agree(
            r1x in -0.3f64..0.3, r1y in -0.3f64..0.3,
            r2x in -0.3f64..0.3, r2y in -0.3f64..0.3,
            x0 in -0.3f64..0.3, y0 in -0.3f64..0.3,
            duration in 0.2f64..1.0,
            b in 0.15f64..0.35,
        ) {
            let p = params_b(b);
            let seg = make_segment(
                PlanarVec::new(r1x, r1y),
                PlanarVec::new(r2x, r2y),
                duration,
                &p,
            ).unwrap();
            let xi0 = PlanarVec::new(x0, y0);
            let xi_t = final_dcm(&seg, xi0);
            // C0 from the initial condition equals Cf from the final one.
            let c0 = xi0 - seg.a * 0.5 - seg.b_coef;
            let e = (-duration / seg.time_constant).exp();
            let cf = (xi_t - seg.a * (0.5 * e) - seg.b_coef) * e;
            prop_assert!((c0 - cf).norm() < 1e-10);
        }

        #[test]
        fn zmp_stays_in_endpoint_box(
            r1x in -0.3f64..0.3, r1y in -0.3f64..0.3,
            r2x in -0.3f64..0.3, r2y in -0.3f64..0.3,
            duration in 0.2f64..1.0,
            frac in 0.0f64..1.0,
        ) {
            let p = params_b(0.2325);
            let r1 = PlanarVec::new(r1x, r1y);
            let r2 = PlanarVec::new(r2x, r2y);
            let seg = make_segment(r1, r2, duration, &p).unwrap();
            let z = eval_zmp(&seg, frac * duration).unwrap();
            let lo = r1.min(r2);
            let hi = r1.max(r2);
            prop_assert!(z.x >= lo.x - 1e-12 && z.x <= hi.x + 1e-12);
            prop_assert!(z.y >= lo.y - 1e-12 && z.y <= hi.y + 1e-12);
        }

        #[test]
        fn closed_form_satisfies_ode(
            x0 in -0.3f64..0.3, y0 in -0.3f64..0.3,
            duration in 0.3f64..0.8,
        ) {
            // Finite-difference derivative of xi(t) minus (xi - r_zmp)/b,
            // sampled at 1 kHz. Five-point stencil: the divergent mode's
            // third derivative is too large for a central difference to
            // reach the tolerance.
            let p = params_b(0.2325);
            let b = p.time_constant();
            let seg = make_segment(
                PlanarVec::new(-0.1, 0.02),
                PlanarVec::new(0.15, -0.06),
                duration,
                &p,
            ).unwrap();
            let cf = solve_dcm_ivp(&seg, PlanarVec::new(x0, y0));
            let h = 1e-3;
            let mut t = 2.0 * h;
            while t < duration - 2.0 * h {
                let fd = (cf.eval(t - 2.0 * h) - cf.eval(t + 2.0 * h)
                    + (cf.eval(t + h) - cf.eval(t - h)) * 8.0)
                    / (12.0 * h);
                let ode = (cf.eval(t) - eval_zmp(&seg, t).unwrap()) / b;
                prop_assert!((fd - ode).norm() < 1e-5);
                t += 50.0 * h;
            }
        }
    }
}
