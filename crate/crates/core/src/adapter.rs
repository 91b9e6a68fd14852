//! Online step adjustment.
//!
//! During single support the next footstep position `r_T`, the timing
//! variable `sigma = e^{T/b}`, and the DCM offset at touchdown `gamma_T`
//! are re-decided every control cycle by a 5-variable QP. The cost pulls
//! the three quantities toward their nominal values; the equality
//! constraint is the boundary-coupling relation of the exponential ZMP
//! interpolation with `xi_0` replaced by the measured DCM, so any
//! solution is dynamically reachable from the current state. Inequalities
//! box the footstep inside the leg's kinematic range and keep `sigma`
//! between the step-duration limits; the DCM offset stays unconstrained.
//!
//! Variable ordering: `[r_T (2), sigma (1), gamma_T (2)]`.

use crate::dcm_plan::{assemble_plan, terminal_zmp, DcmPlan, PlanError, SsSegment, TimedSegment};
use crate::footstep::{Footstep, Side};
use crate::geometry::PlanarVec;
use crate::lip::LipParams;
use crate::qp::{self, QpError, QpProblem, QpStatus};
use crate::zmp_interp::coupling_residual;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AdapterError {
    #[error("adapter weights must be positive")]
    BadWeights,
    #[error("invalid adapter bounds: {0}")]
    BadBounds(&'static str),
    #[error("QP construction failed: {0}")]
    Qp(#[from] QpError),
    #[error("step adjustment QP is infeasible")]
    Infeasible,
    #[error("QP did not converge within the iteration budget")]
    NoConvergence,
    #[error("swing index {0} does not name an upcoming footstep")]
    BadSwingIndex(usize),
    #[error("replanning failed: {0}")]
    Replan(#[from] PlanError),
}

/// Targets pulled from the nominal trajectory for the current cycle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdapterNominal {
    /// Nominal next-footstep ZMP (m).
    pub rt_nom: PlanarVec,
    /// Remaining nominal single-support time at this cycle (s).
    pub t_rem_nom: f64,
    /// Nominal DCM offset at the start of the next step (m).
    pub gamma_nom: PlanarVec,
}

/// Cost weights; all positive so the QP is strictly convex.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdapterWeights {
    pub alpha1: f64,
    pub alpha2: f64,
    pub alpha3: f64,
}

impl Default for AdapterWeights {
    /// The DCM offset is weighted highest: it governs the stability of
    /// every following step. The timing weight is small because `sigma`
    /// is dimensionless and of order `e^{T/b}` (units apart from the
    /// position terms); anything much larger freezes the step timing and
    /// forfeits the recovery margin that early touchdowns provide.
    fn default() -> Self {
        Self {
            alpha1: 1.0,
            alpha2: 5.0,
            alpha3: 0.01,
        }
    }
}

impl AdapterWeights {
    pub fn validate(&self) -> Result<(), AdapterError> {
        if self.alpha1 > 0.0 && self.alpha2 > 0.0 && self.alpha3 > 0.0 {
            Ok(())
        } else {
            Err(AdapterError::BadWeights)
        }
    }
}

/// Feasible region for the QP: a rectangle for `r_T` expressed through a
/// row frame (identity for axis-aligned, a rotation for stance-relative
/// boxes) and an interval for `sigma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdapterBounds {
    /// Rows applied to `r_T` before comparing against the box.
    pub rt_frame: [[f64; 2]; 2],
    pub rt_min: PlanarVec,
    pub rt_max: PlanarVec,
    pub sigma_min: f64,
    pub sigma_max: f64,
}

impl AdapterBounds {
    pub fn axis_aligned(
        rt_min: PlanarVec,
        rt_max: PlanarVec,
        sigma_min: f64,
        sigma_max: f64,
    ) -> Self {
        Self {
            rt_frame: [[1.0, 0.0], [0.0, 1.0]],
            rt_min,
            rt_max,
            sigma_min,
            sigma_max,
        }
    }

    pub fn validate(&self) -> Result<(), AdapterError> {
        if !(self.rt_min.x < self.rt_max.x && self.rt_min.y < self.rt_max.y) {
            return Err(AdapterError::BadBounds("rt_min must be below rt_max"));
        }
        if !(self.sigma_min > 1.0) {
            return Err(AdapterError::BadBounds("sigma_min must exceed 1"));
        }
        if self.sigma_min > self.sigma_max {
            return Err(AdapterError::BadBounds("sigma_min above sigma_max"));
        }
        Ok(())
    }
}

/// Kinematic rectangle for the next footstep in the stance-foot frame:
/// `sagittal` bounds forward/backward reach symmetrically, the lateral
/// band keeps the swing foot on its own side (never crossing the stance
/// foot).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FootRect {
    pub sagittal: f64,
    pub lateral_min: f64,
    pub lateral_max: f64,
}

impl Default for FootRect {
    fn default() -> Self {
        Self {
            sagittal: 0.25,
            lateral_min: 0.07,
            lateral_max: 0.30,
        }
    }
}

impl AdapterBounds {
    /// Box for the swing target around the stance foot, rotated into the
    /// world frame.
    pub fn from_foot_rect(
        rect: &FootRect,
        stance_position: PlanarVec,
        stance_yaw: f64,
        swing_side: Side,
        sigma_min: f64,
        sigma_max: f64,
    ) -> Self {
        let (lat_lo, lat_hi) = match swing_side {
            Side::Left => (rect.lateral_min, rect.lateral_max),
            Side::Right => (-rect.lateral_max, -rect.lateral_min),
        };
        // Rows of R(-yaw): rt_frame * r_T expresses r_T in the stance frame.
        let (s, c) = stance_yaw.sin_cos();
        let rt_frame = [[c, s], [-s, c]];
        let anchor_local = PlanarVec::new(
            rt_frame[0][0] * stance_position.x + rt_frame[0][1] * stance_position.y,
            rt_frame[1][0] * stance_position.x + rt_frame[1][1] * stance_position.y,
        );
        Self {
            rt_frame,
            rt_min: anchor_local + PlanarVec::new(-rect.sagittal, lat_lo),
            rt_max: anchor_local + PlanarVec::new(rect.sagittal, lat_hi),
            sigma_min,
            sigma_max,
        }
    }
}

/// Decoded QP result.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdapterSolution {
    /// Adapted next-footstep ZMP (m).
    pub rt: PlanarVec,
    /// Adapted timing variable `e^{T/b}`.
    pub sigma: f64,
    /// Remaining single-support time `b ln sigma` (s).
    pub t_adapted: f64,
    /// Adapted DCM offset at touchdown (m).
    pub gamma_t: PlanarVec,
    /// DCM at touchdown, `gamma_t + rt` (m).
    pub xi_t: PlanarVec,
}

/// Step-duration data used to shrink the horizon each cycle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepTiming {
    /// Nominal full duration of the current step (s).
    pub nominal_duration: f64,
    pub t_min: f64,
    pub t_max: f64,
    /// Floor on the remaining time; keeps `sigma_min > 1` near touchdown.
    pub min_remaining: f64,
}

impl StepTiming {
    pub fn new(nominal_duration: f64, t_min: f64, t_max: f64) -> Self {
        Self {
            nominal_duration,
            t_min,
            t_max,
            min_remaining: 0.05,
        }
    }
}

/// Per-cycle sigma bounds from the remaining admissible durations.
pub fn sigma_window(timing: &StepTiming, elapsed: f64, params: &LipParams) -> (f64, f64) {
    let b = params.time_constant();
    let lo = (timing.t_min - elapsed).max(timing.min_remaining);
    let hi = (timing.t_max - elapsed).max(timing.min_remaining);
    ((lo / b).exp(), (hi / b).exp())
}

/// Assemble the 5-variable QP for one cycle.
///
/// `r1`, `r2` are the current stance segment's ZMP endpoints (equal for a
/// fixed stance ZMP), `xi_now` is the measured DCM substituted for the
/// initial condition. The equality rows encode the boundary coupling
/// `r_T + (r2 - xi0 - delta/2) sigma + gamma_T = r1 + delta/2`.
pub fn build_problem(
    xi_now: PlanarVec,
    r1: PlanarVec,
    r2: PlanarVec,
    nominal: &AdapterNominal,
    weights: &AdapterWeights,
    bounds: &AdapterBounds,
    params: &LipParams,
) -> Result<QpProblem, AdapterError> {
    weights.validate()?;
    bounds.validate()?;
    let b = params.time_constant();
    let sigma_nom = (nominal.t_rem_nom / b).exp();

    let h = DMatrix::from_diagonal(&DVector::from_row_slice(&[
        2.0 * weights.alpha1,
        2.0 * weights.alpha1,
        2.0 * weights.alpha3,
        2.0 * weights.alpha2,
        2.0 * weights.alpha2,
    ]));
    let g = DVector::from_row_slice(&[
        -2.0 * weights.alpha1 * nominal.rt_nom.x,
        -2.0 * weights.alpha1 * nominal.rt_nom.y,
        -2.0 * weights.alpha3 * sigma_nom,
        -2.0 * weights.alpha2 * nominal.gamma_nom.x,
        -2.0 * weights.alpha2 * nominal.gamma_nom.y,
    ]);

    let delta = r2 - r1;
    let v = r2 - xi_now - delta * 0.5;
    let rhs = r1 + delta * 0.5;
    let a_eq = DMatrix::from_row_slice(
        2,
        5,
        &[
            1.0, 0.0, v.x, 1.0, 0.0, //
            0.0, 1.0, v.y, 0.0, 1.0,
        ],
    );
    let b_eq = DVector::from_row_slice(&[rhs.x, rhs.y]);

    let f = &bounds.rt_frame;
    #[rustfmt::skip]
    let a_in = DMatrix::from_row_slice(6, 5, &[
         f[0][0],  f[0][1], 0.0, 0.0, 0.0,
         f[1][0],  f[1][1], 0.0, 0.0, 0.0,
        -f[0][0], -f[0][1], 0.0, 0.0, 0.0,
        -f[1][0], -f[1][1], 0.0, 0.0, 0.0,
         0.0,      0.0,     1.0, 0.0, 0.0,
         0.0,      0.0,    -1.0, 0.0, 0.0,
    ]);
    let b_in = DVector::from_row_slice(&[
        bounds.rt_max.x,
        bounds.rt_max.y,
        -bounds.rt_min.x,
        -bounds.rt_min.y,
        bounds.sigma_max,
        -bounds.sigma_min,
    ]);

    Ok(QpProblem::new(h, g, a_eq, b_eq, a_in, b_in)?)
}

fn decode(z: &DVector<f64>, params: &LipParams) -> AdapterSolution {
    let rt = PlanarVec::new(z[0], z[1]);
    let sigma = z[2];
    let gamma_t = PlanarVec::new(z[3], z[4]);
    AdapterSolution {
        rt,
        sigma,
        t_adapted: params.time_constant() * sigma.ln(),
        gamma_t,
        xi_t: gamma_t + rt,
    }
}

/// Solve one adaptation cycle for a fixed stance ZMP.
///
/// `elapsed` is the time spent in the current step so far; the sigma
/// target and bounds shrink with it. Returns the decoded solution, whose
/// `t_adapted` is the *remaining* single-support time.
#[allow(clippy::too_many_arguments)]
pub fn adapt(
    xi_now: PlanarVec,
    elapsed: f64,
    stance: &Footstep,
    swing_side: Side,
    rt_nom: PlanarVec,
    gamma_nom: PlanarVec,
    timing: &StepTiming,
    rect: &FootRect,
    weights: &AdapterWeights,
    params: &LipParams,
) -> Result<AdapterSolution, AdapterError> {
    let (sigma_min, sigma_max) = sigma_window(timing, elapsed, params);
    let bounds = AdapterBounds::from_foot_rect(
        rect,
        stance.position,
        stance.yaw,
        swing_side,
        sigma_min,
        sigma_max,
    );
    let nominal = AdapterNominal {
        rt_nom,
        t_rem_nom: (timing.nominal_duration - elapsed).max(timing.min_remaining),
        gamma_nom,
    };
    let r = stance.position;
    let problem = build_problem(xi_now, r, r, &nominal, weights, &bounds, params)?;
    let sol = qp::solve(&problem, qp::DEFAULT_TOL, qp::DEFAULT_MAX_ITER)?;
    match sol.status {
        QpStatus::Optimal => {}
        QpStatus::Infeasible => return Err(AdapterError::Infeasible),
        QpStatus::MaxIterations => return Err(AdapterError::NoConvergence),
    }
    let decoded = decode(&sol.z, params);
    debug_assert!(
        coupling_residual(xi_now, r, r, decoded.rt, decoded.gamma_t, decoded.sigma).norm() < 1e-6
    );
    Ok(decoded)
}

/// Nominal DCM offset at the touchdown of `footsteps[swing_index]`,
/// recomputed by backward recursion over the downstream steps.
pub fn nominal_offset(
    footsteps: &[Footstep],
    swing_index: usize,
    params: &LipParams,
) -> Result<PlanarVec, AdapterError> {
    if swing_index < 2 || swing_index >= footsteps.len() {
        return Err(AdapterError::BadSwingIndex(swing_index));
    }
    let terminal = terminal_zmp(footsteps);
    let rt = footsteps[swing_index].position;
    if swing_index == footsteps.len() - 1 {
        // Last step: the DCM target at touchdown is the terminal point.
        return Ok(terminal - rt);
    }
    let mut zmp_points = Vec::new();
    let mut durations = Vec::new();
    for j in (swing_index + 1)..footsteps.len() {
        zmp_points.push(footsteps[j - 1].position);
        durations.push(footsteps[j].impact_time - footsteps[j - 1].impact_time);
    }
    zmp_points.push(terminal);
    let boundaries = crate::dcm_plan::backward_recursion(&zmp_points, &durations, params)?;
    Ok(boundaries[0].0 - rt)
}

/// Result of applying an adapter solution to the step sequence.
#[derive(Debug, Clone)]
pub struct ReplanOutcome {
    /// Updated footstep sequence: swing target moved and re-timed,
    /// downstream impacts rigidly shifted.
    pub footsteps: Vec<Footstep>,
    /// Plan rebuilt from the measured DCM through the adapted touchdown
    /// and the downstream recursion.
    pub plan: DcmPlan,
    /// The plan's committed DCM boundary at the adapted touchdown.
    pub touchdown_dcm: PlanarVec,
}

/// Re-plan after an adaptation: replace the swing target with the
/// solution, shift every later footstep by the same time offset, anchor
/// the remaining single support on the measured DCM, and rebuild the DCM
/// plan through the downstream recursion.
///
/// The solution's horizon `t_adapted` runs to the phase junction; the
/// physical touchdown (the footstep's impact time) precedes it by half
/// the double-support window.
pub fn replan_after_adapt(
    solution: &AdapterSolution,
    footsteps: &[Footstep],
    swing_index: usize,
    t_now: f64,
    xi_now: PlanarVec,
    ds_duration: f64,
    params: &LipParams,
) -> Result<ReplanOutcome, AdapterError> {
    if swing_index < 2 || swing_index >= footsteps.len() {
        return Err(AdapterError::BadSwingIndex(swing_index));
    }
    let half = 0.5 * ds_duration;
    let mut steps = footsteps.to_vec();
    let junction = t_now + solution.t_adapted;
    let new_impact = junction - half;
    let shift = new_impact - steps[swing_index].impact_time;
    steps[swing_index].position = solution.rt;
    steps[swing_index].impact_time = new_impact;
    steps[swing_index].step_duration = new_impact - steps[swing_index - 1].impact_time;
    for s in steps.iter_mut().skip(swing_index + 1) {
        s.impact_time += shift;
    }

    let terminal = terminal_zmp(&steps);
    // The remaining current support: forward exponential from the
    // measured DCM about the stance anchor. Its end value equals the QP's
    // xi_T through the equality constraint.
    let stance_anchor = steps[swing_index - 1].position;
    let current = SsSegment::from_ios(stance_anchor, xi_now, solution.t_adapted, params);
    let touchdown_dcm = current.xi_eos;

    let mut segments = vec![TimedSegment {
        start: t_now,
        segment: current,
    }];
    if swing_index + 1 < steps.len() {
        let mut zmp_points = Vec::new();
        let mut durations = Vec::new();
        for j in (swing_index + 1)..steps.len() {
            zmp_points.push(steps[j - 1].position);
            durations.push(steps[j].impact_time - steps[j - 1].impact_time);
        }
        zmp_points.push(terminal);
        let boundaries = crate::dcm_plan::backward_recursion(&zmp_points, &durations, params)?;
        for (p, j) in ((swing_index + 1)..steps.len()).enumerate() {
            segments.push(TimedSegment {
                start: steps[j - 1].impact_time + half,
                segment: SsSegment {
                    zmp: zmp_points[p],
                    xi_ios: boundaries[p].0,
                    xi_eos: boundaries[p].1,
                    duration: durations[p],
                },
            });
        }
    }
    let plan = assemble_plan(&segments, terminal, ds_duration, params)?;
    Ok(ReplanOutcome {
        footsteps: steps,
        plan,
        touchdown_dcm,
    })
}
