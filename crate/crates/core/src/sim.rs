//! Reduced-model plant and closed-loop executor.
//!
//! The plant integrates the planar DCM/CoM dynamics under the commanded
//! VRP and scripted external pushes with RK4. The executor runs the full
//! per-cycle pipeline: during single support it re-solves the step
//! adjustment QP from the measured DCM and rebuilds the plan; the DCM
//! controller turns plan references into VRP commands; the commanded VRP
//! is saturated to the support region (a torque-controlled robot cannot
//! realize a ZMP outside its feet, and without that limit no push could
//! ever cause a fall); swing trajectories are generated and re-timed as
//! the adapter moves touchdowns.

use crate::adapter::{self, AdapterError, StepTiming};
use crate::controller::vrp_command;
use crate::dcm_plan::{build_plan, DsSegment, PlanError};
use crate::footstep::{plan_footsteps, sample_unicycle, Footstep, FootstepError, Side};
use crate::geometry::PlanarVec;
use crate::lip::{com_rate, dcm_rate, DcmState, LipParams};
use crate::scenario::{ConfigError, ScenarioConfig};
use serde::{Deserialize, Serialize};
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("footstep planning failed: {0}")]
    Footsteps(#[from] FootstepError),
    #[error("DCM planning failed: {0}")]
    Plan(#[from] PlanError),
    #[error("adapter setup failed: {0}")]
    Adapter(#[from] AdapterError),
    #[error("swing profile duration must be positive, got {0}")]
    BadSwingDuration(f64),
}

/// Scripted external force window applied to the plant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PushEvent {
    /// Window start (s).
    pub t_start: f64,
    /// Window length (s).
    pub duration: f64,
    /// Constant force over the window (N).
    pub force: PlanarVec,
}

impl PushEvent {
    pub fn active_at(&self, t: f64) -> bool {
        t >= self.t_start && t < self.t_start + self.duration
    }
}

fn total_force(pushes: &[PushEvent], t: f64) -> PlanarVec {
    pushes
        .iter()
        .filter(|p| p.active_at(t))
        .fold(PlanarVec::ZERO, |acc, p| acc + p.force)
}

/// Support phase bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Phase {
    SingleSupport { stance_side: Side, elapsed: f64 },
    DoubleSupport { elapsed: f64 },
}

/// Plant state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimState {
    pub time: f64,
    pub dcm_state: DcmState,
    pub phase: Phase,
    /// Swing foot pose: planar position plus height.
    pub swing_pose: PlanarVec,
    pub swing_height: f64,
}

/// Advance the plant one control period under a constant VRP command and
/// whatever pushes are active, using RK4 on
/// `xi_dot = (xi - vrp)/b + (b/m) f(t)`, `x_dot = (xi - x)/b`.
pub fn step_sim(
    state: &SimState,
    vrp_cmd: PlanarVec,
    pushes: &[PushEvent],
    dt: f64,
    params: &LipParams,
) -> SimState {
    let t = state.time;
    let deriv = |tau: f64, xi: PlanarVec, com: PlanarVec| {
        let f = total_force(pushes, tau);
        (
            dcm_rate(xi, vrp_cmd, params, f),
            com_rate(&DcmState::new(xi, com), params),
        )
    };
    let (xi0, com0) = (state.dcm_state.xi, state.dcm_state.com);
    let (k1x, k1c) = deriv(t, xi0, com0);
    let (k2x, k2c) = deriv(t + dt / 2.0, xi0 + k1x * (dt / 2.0), com0 + k1c * (dt / 2.0));
    let (k3x, k3c) = deriv(t + dt / 2.0, xi0 + k2x * (dt / 2.0), com0 + k2c * (dt / 2.0));
    let (k4x, k4c) = deriv(t + dt, xi0 + k3x * dt, com0 + k3c * dt);
    let xi = xi0 + (k1x + k2x * 2.0 + k3x * 2.0 + k4x) * (dt / 6.0);
    let com = com0 + (k1c + k2c * 2.0 + k3c * 2.0 + k4c) * (dt / 6.0);

    let phase = match state.phase {
        Phase::SingleSupport {
            stance_side,
            elapsed,
        } => Phase::SingleSupport {
            stance_side,
            elapsed: elapsed + dt,
        },
        Phase::DoubleSupport { elapsed } => Phase::DoubleSupport {
            elapsed: elapsed + dt,
        },
    };
    SimState {
        time: t + dt,
        dcm_state: DcmState::new(xi, com),
        phase,
        swing_pose: state.swing_pose,
        swing_height: state.swing_height,
    }
}

fn cubic1(p0: f64, v0: f64, p1: f64, v1: f64, d: f64) -> [f64; 4] {
    let c2 = (3.0 * (p1 - p0) - (2.0 * v0 + v1) * d) / (d * d);
    let c3 = (2.0 * (p0 - p1) + (v0 + v1) * d) / (d * d * d);
    [p0, v0, c2, c3]
}

fn eval_cubic1(c: &[f64; 4], s: f64) -> (f64, f64) {
    (
        c[0] + c[1] * s + c[2] * s * s + c[3] * s * s * s,
        c[1] + 2.0 * c[2] * s + 3.0 * c[3] * s * s,
    )
}

/// Swing foot trajectory: a planar cubic between the footholds plus a
/// two-piece vertical cubic through the apex.
#[derive(Debug, Clone, PartialEq)]
pub struct SwingProfile {
    xy: DsSegment,
    z_up: [f64; 4],
    z_down: [f64; 4],
    t_apex: f64,
    pub start_pose: PlanarVec,
    pub end_pose: PlanarVec,
    pub duration: f64,
}

impl SwingProfile {
    pub fn eval(&self, t: f64) -> (PlanarVec, f64) {
        let t = t.clamp(0.0, self.duration);
        let (xy, _) = self.xy.eval(t);
        let z = if t < self.t_apex {
            eval_cubic1(&self.z_up, t).0
        } else {
            eval_cubic1(&self.z_down, t - self.t_apex).0
        };
        (xy, z.max(0.0))
    }

    fn eval_with_rates(&self, t: f64) -> (PlanarVec, PlanarVec, f64, f64) {
        let t = t.clamp(0.0, self.duration);
        let (xy, xy_dot) = self.xy.eval(t);
        let (z, z_dot) = if t < self.t_apex {
            eval_cubic1(&self.z_up, t)
        } else {
            eval_cubic1(&self.z_down, t - self.t_apex)
        };
        (xy, xy_dot, z.max(0.0), z_dot)
    }
}

/// Swing trajectory from lift-off to touchdown: zero planar velocity at
/// both ends, vertical apex at mid-swing.
pub fn make_swing(
    start: PlanarVec,
    end: PlanarVec,
    duration: f64,
    apex_height: f64,
) -> Result<SwingProfile, SimError> {
    if !(duration > 0.0) {
        return Err(SimError::BadSwingDuration(duration));
    }
    let t_apex = 0.5 * duration;
    Ok(SwingProfile {
        xy: DsSegment::from_boundary(start, PlanarVec::ZERO, end, PlanarVec::ZERO, duration),
        z_up: cubic1(0.0, 0.0, apex_height, 0.0, t_apex),
        z_down: cubic1(apex_height, 0.0, 0.0, 0.0, duration - t_apex),
        t_apex,
        start_pose: start,
        end_pose: end,
        duration,
    })
}

/// Re-time a swing mid-flight: the new profile starts from the current
/// pose and velocity and lands on the (possibly moved) target at the new
/// time. Ascending swings keep an apex; descending ones go straight down.
pub fn retime_swing(
    profile: &SwingProfile,
    t_local: f64,
    new_end: PlanarVec,
    new_remaining: f64,
    apex_height: f64,
) -> Result<SwingProfile, SimError> {
    if !(new_remaining > 0.0) {
        return Err(SimError::BadSwingDuration(new_remaining));
    }
    let (xy, xy_dot, z, z_dot) = profile.eval_with_rates(t_local);
    let (t_apex, z_up, z_down) = if t_local < profile.t_apex {
        let t_apex = 0.5 * new_remaining;
        (
            t_apex,
            cubic1(z, z_dot, apex_height, 0.0, t_apex),
            cubic1(apex_height, 0.0, 0.0, 0.0, new_remaining - t_apex),
        )
    } else {
        // Past the apex: one descending cubic; the unused "up" piece is
        // degenerate.
        (
            0.0,
            [z, 0.0, 0.0, 0.0],
            cubic1(z, z_dot, 0.0, 0.0, new_remaining),
        )
    };
    Ok(SwingProfile {
        xy: DsSegment::from_boundary(xy, xy_dot, new_end, PlanarVec::ZERO, new_remaining),
        z_up,
        z_down,
        t_apex,
        start_pose: xy,
        end_pose: new_end,
        duration: new_remaining,
    })
}

/// Fall test: the DCM left the capture neighbourhood of the stance
/// anchor, or the adapter has been unable to place a reachable step for
/// three consecutive cycles.
pub fn detect_fall(
    xi: PlanarVec,
    stance_anchor: PlanarVec,
    fall_radius: f64,
    infeasible_streak: usize,
) -> bool {
    (xi - stance_anchor).norm() > fall_radius || infeasible_streak >= 3
}

/// Phase label in the log.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseTag {
    Ss,
    Ds,
}

/// Which feet carry the robot in a log row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StanceTag {
    Left,
    Right,
    Both,
}

/// One control cycle in the log (pre-integration state plus commands).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogRow {
    pub t: f64,
    pub xi: PlanarVec,
    pub xi_ref: PlanarVec,
    pub com: PlanarVec,
    pub zmp_ref: PlanarVec,
    pub vrp_cmd: PlanarVec,
    pub swing: PlanarVec,
    pub swing_z: f64,
    pub phase: PhaseTag,
    pub stance: StanceTag,
    pub push: PlanarVec,
}

/// Nominal vs adapted record for one footstep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FootprintRow {
    pub index: usize,
    pub side: Side,
    pub nominal_position: PlanarVec,
    pub nominal_yaw: f64,
    pub nominal_impact: f64,
    pub adapted_position: PlanarVec,
    pub adapted_impact: f64,
    pub was_adapted: bool,
}

/// Full output of a closed-loop run.
#[derive(Debug, Clone)]
pub struct SimLog {
    pub rows: Vec<LogRow>,
    pub footprints: Vec<FootprintRow>,
    pub fell: bool,
    pub fall_time: Option<f64>,
    /// Mean wall time of one adaptation cycle (QP build + solve +
    /// replan), seconds. Zero when the adapter never ran.
    pub mean_cycle_seconds: f64,
    pub adapter_cycles: usize,
    pub infeasible_cycles: usize,
    /// Contiguous phase spans (tag, start, end) covering the whole run.
    pub phase_spans: Vec<(PhaseTag, f64, f64)>,
    /// Swing-step index and the sim time its touchdown was registered.
    pub touchdowns: Vec<(usize, f64)>,
    /// Total simulated time (s).
    pub duration: f64,
}

/// Position-or-duration change that marks a footstep as genuinely
/// adapted (shift-only re-timing does not count).
const ADAPTED_EPS: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
struct PhaseInfo {
    tag: PhaseTag,
    /// `Some(k)`: footstep `k` is in flight.
    swing_index: Option<usize>,
    /// Supporting footstep indices (one in SS, two in DS).
    support: (usize, Option<usize>),
    start: f64,
    end: f64,
}

/// Phase schedule from the (current) footstep timeline: single support
/// runs up to each impact, a double support of length `ds` follows it.
fn phase_at(steps: &[Footstep], ds: f64, t: f64, horizon: f64) -> PhaseInfo {
    let n = steps.len();
    if n <= 2 {
        return PhaseInfo {
            tag: PhaseTag::Ds,
            swing_index: None,
            support: (0, Some(1)),
            start: 0.0,
            end: horizon,
        };
    }
    if t < steps[2].impact_time {
        return PhaseInfo {
            tag: PhaseTag::Ss,
            swing_index: Some(2),
            support: (1, None),
            start: 0.0,
            end: steps[2].impact_time,
        };
    }
    for k in 2..n {
        let imp = steps[k].impact_time;
        if t >= imp && t < imp + ds {
            return PhaseInfo {
                tag: PhaseTag::Ds,
                swing_index: None,
                support: (k, Some(k - 1)),
                start: imp,
                end: imp + ds,
            };
        }
        if k + 1 < n && t >= imp + ds && t < steps[k + 1].impact_time {
            return PhaseInfo {
                tag: PhaseTag::Ss,
                swing_index: Some(k + 1),
                support: (k, None),
                start: imp + ds,
                end: steps[k + 1].impact_time,
            };
        }
    }
    let last = steps[n - 1].impact_time;
    PhaseInfo {
        tag: PhaseTag::Ds,
        swing_index: None,
        support: (n - 1, Some(n - 2)),
        start: last + ds,
        end: horizon,
    }
}

/// Clamp a commanded VRP into the support region: the stance foot box in
/// single support, the bounding box of both feet in double support.
fn clamp_vrp(
    vrp: PlanarVec,
    steps: &[Footstep],
    info: &PhaseInfo,
    half: PlanarVec,
) -> PlanarVec {
    let foot_box = |f: &Footstep| {
        // Axis-aligned bound of the rotated foot rectangle.
        let (s, c) = f.yaw.sin_cos();
        let hw = PlanarVec::new(
            c.abs() * half.x + s.abs() * half.y,
            s.abs() * half.x + c.abs() * half.y,
        );
        (f.position - hw, f.position + hw)
    };
    let (lo, hi) = match info.support {
        (a, None) => foot_box(&steps[a]),
        (a, Some(b)) => {
            let (lo_a, hi_a) = foot_box(&steps[a]);
            let (lo_b, hi_b) = foot_box(&steps[b]);
            (lo_a.min(lo_b), hi_a.max(hi_b))
        }
    };
    PlanarVec::new(vrp.x.clamp(lo.x, hi.x), vrp.y.clamp(lo.y, hi.y))
}

fn stance_anchor(steps: &[Footstep], info: &PhaseInfo) -> PlanarVec {
    match info.support {
        (a, None) => steps[a].position,
        (a, Some(b)) => (steps[a].position + steps[b].position) * 0.5,
    }
}

struct SwingTracker {
    profile: SwingProfile,
    profile_start: f64,
    target: PlanarVec,
    impact: f64,
}

/// Run the whole closed loop for a scenario.
pub fn run_closed_loop(config: &ScenarioConfig) -> Result<SimLog, SimError> {
    config.validate()?;
    let params = config.model.to_params().map_err(SimError::Config)?;
    let b = params.time_constant();
    let ds = config.ds();
    let dt = config.dt;

    let samples = sample_unicycle(&config.path, &config.unicycle)?;
    let nominal_steps = plan_footsteps(&samples, &config.unicycle)?;
    let nominal_plan = build_plan(&nominal_steps, ds, &params)?;

    let mut steps = nominal_steps.clone();
    let mut plan = nominal_plan;

    let horizon = steps.last().map(|s| s.impact_time).unwrap_or(0.0)
        + ds
        + config.settle_duration;
    let n_cycles = (horizon / dt).ceil() as usize;

    let init = plan.sample(0.0, &params);
    let mut state = SimState {
        time: 0.0,
        dcm_state: DcmState::new(init.xi, init.xi - init.xi_dot * b),
        phase: match phase_at(&steps, ds, 0.0, horizon).tag {
            PhaseTag::Ss => Phase::SingleSupport {
                stance_side: steps[1].side,
                elapsed: 0.0,
            },
            PhaseTag::Ds => Phase::DoubleSupport { elapsed: 0.0 },
        },
        swing_pose: steps[0].position,
        swing_height: 0.0,
    };

    let mut rows = Vec::with_capacity(n_cycles);
    let mut phase_spans: Vec<(PhaseTag, f64, f64)> = Vec::new();
    let mut touchdowns = Vec::new();
    let mut swing: Option<SwingTracker> = None;
    let mut frozen_gamma: Option<(usize, PlanarVec)> = None;
    let mut infeasible_streak = 0usize;
    let mut infeasible_cycles = 0usize;
    let mut adapter_cycles = 0usize;
    let mut adapter_time = 0.0f64;
    let mut fell = false;
    let mut fall_time = None;
    let mut prev_info: Option<PhaseInfo> = None;
    let mut span_open = 0.0f64;
    let mut final_time = 0.0;

    for cycle in 0..n_cycles {
        let t = cycle as f64 * dt;
        let info = phase_at(&steps, ds, t, horizon);

        // Phase transition bookkeeping.
        let changed = prev_info.map_or(true, |p| (p.tag, p.swing_index, p.support) != (info.tag, info.swing_index, info.support));
        if changed {
            if let Some(p) = prev_info {
                phase_spans.push((p.tag, span_open, t));
                span_open = t;
                if p.tag == PhaseTag::Ss && info.tag == PhaseTag::Ds {
                    if let Some(k) = p.swing_index {
                        touchdowns.push((k, t));
                        // The swing foot is down.
                        if let Some(tr) = swing.take() {
                            state.swing_pose = tr.target;
                            state.swing_height = 0.0;
                        }
                    }
                }
            }
            match info.tag {
                PhaseTag::Ss => {
                    let k = info.swing_index.unwrap();
                    state.phase = Phase::SingleSupport {
                        stance_side: steps[k - 1].side,
                        elapsed: t - info.start,
                    };
                    let profile = make_swing(
                        steps[k - 2].position,
                        steps[k].position,
                        (info.end - info.start).max(dt),
                        config.apex_height,
                    )?;
                    swing = Some(SwingTracker {
                        profile,
                        profile_start: info.start,
                        target: steps[k].position,
                        impact: steps[k].impact_time,
                    });
                    frozen_gamma = None;
                }
                PhaseTag::Ds => {
                    state.phase = Phase::DoubleSupport {
                        elapsed: t - info.start,
                    };
                }
            }
        }

        // Step adaptation: single support only, and only while the
        // remaining time leaves room to re-plan.
        if config.adapter_enabled && info.tag == PhaseTag::Ss {
            let k = info.swing_index.unwrap();
            let half = 0.5 * ds;
            // The adapter's horizon runs to the phase junction, half a
            // double-support window past the touchdown.
            let domain_start = if k == 2 {
                0.0
            } else {
                steps[k - 1].impact_time + half
            };
            let remaining = steps[k].impact_time + half - t;
            // Keep the commanded junction far enough out that the
            // touchdown stays in the future; once the floor is reached the
            // step is committed, otherwise it would recede forever.
            let min_rem = config.min_remaining.max(half + dt);
            if remaining > min_rem {
                let tic = Instant::now();
                let stance = steps[k - 1];
                let elapsed = t - domain_start;
                // The offset target comes from the nominal trajectory
                // generator; targeting the adapted sequence instead would
                // legitimize any displacement and the gait would never
                // walk back to the nominal line.
                let gamma_nom = if config.refresh_gamma_nom {
                    adapter::nominal_offset(&nominal_steps, k, &params)?
                } else {
                    match frozen_gamma {
                        Some((idx, g)) if idx == k => g,
                        _ => {
                            let g = adapter::nominal_offset(&steps, k, &params)?;
                            frozen_gamma = Some((k, g));
                            g
                        }
                    }
                };
                let timing = StepTiming {
                    nominal_duration: if k == 2 {
                        nominal_steps[2].impact_time + half
                    } else {
                        nominal_steps[k].step_duration
                    },
                    t_min: config.unicycle.t_min,
                    t_max: config.unicycle.t_max,
                    min_remaining: min_rem,
                };
                match adapter::adapt(
                    state.dcm_state.xi,
                    elapsed,
                    &stance,
                    steps[k].side,
                    nominal_steps[k].position,
                    gamma_nom,
                    &timing,
                    &config.foot_rect,
                    &config.weights,
                    &params,
                ) {
                    Ok(sol) => {
                        infeasible_streak = 0;
                        let outcome = adapter::replan_after_adapt(
                            &sol,
                            &steps,
                            k,
                            t,
                            state.dcm_state.xi,
                            ds,
                            &params,
                        )?;
                        steps = outcome.footsteps;
                        plan = outcome.plan;
                        if let Some(tr) = swing.as_mut() {
                            let moved = (steps[k].position - tr.target).norm() > 1e-9
                                || (steps[k].impact_time - tr.impact).abs() > 1e-9;
                            if moved {
                                let local = t - tr.profile_start;
                                let new_remaining = (steps[k].impact_time - t).max(dt);
                                tr.profile = retime_swing(
                                    &tr.profile,
                                    local,
                                    steps[k].position,
                                    new_remaining,
                                    config.apex_height,
                                )?;
                                tr.profile_start = t;
                                tr.target = steps[k].position;
                                tr.impact = steps[k].impact_time;
                            }
                        }
                    }
                    Err(AdapterError::Infeasible) | Err(AdapterError::NoConvergence) => {
                        // Keep the previous plan and footsteps this cycle.
                        infeasible_streak += 1;
                        infeasible_cycles += 1;
                    }
                    Err(e) => return Err(e.into()),
                }
                adapter_cycles += 1;
                adapter_time += tic.elapsed().as_secs_f64();
            }
        }

        // References, control, swing pose, logging.
        let refs = plan.sample(t, &params);
        // Feedforward: the constant VRP that carries the reference exactly
        // across one control period (for an exponential segment this is
        // the stance anchor itself). A zero-order hold of the continuous
        // feedforward would leak O(dt^2) tracking error per cycle through
        // the double-support cubics, which the per-cycle re-anchoring
        // would then bake into the footprints.
        let refs_next = plan.sample(t + dt, &params);
        let growth = (dt / b).exp();
        let vrp_ff = (refs_next.xi - refs.xi * growth) / (1.0 - growth);
        let feedback =
            vrp_command(state.dcm_state.xi, refs.xi, refs.xi_dot, &config.gains, &params)
                - refs.zmp;
        let vrp = clamp_vrp(vrp_ff + feedback, &steps, &info, config.support_half_extents);
        if let Some(tr) = swing.as_ref() {
            let (xy, z) = tr.profile.eval(t - tr.profile_start);
            state.swing_pose = xy;
            state.swing_height = z;
        }
        let push_now = total_force(&config.pushes, t);
        rows.push(LogRow {
            t,
            xi: state.dcm_state.xi,
            xi_ref: refs.xi,
            com: state.dcm_state.com,
            zmp_ref: refs.zmp,
            vrp_cmd: vrp,
            swing: state.swing_pose,
            swing_z: state.swing_height,
            phase: info.tag,
            stance: match (info.tag, info.support) {
                (PhaseTag::Ss, (a, _)) => match steps[a].side {
                    Side::Left => StanceTag::Left,
                    Side::Right => StanceTag::Right,
                },
                (PhaseTag::Ds, _) => StanceTag::Both,
            },
            push: push_now,
        });

        state = step_sim(&state, vrp, &config.pushes, dt, &params);

        let anchor = stance_anchor(&steps, &info);
        if detect_fall(state.dcm_state.xi, anchor, config.fall_radius, infeasible_streak) {
            fell = true;
            fall_time = Some(state.time);
            final_time = state.time;
            break;
        }
        prev_info = Some(info);
        final_time = state.time;
    }
    if let Some(p) = prev_info {
        if final_time > span_open {
            phase_spans.push((p.tag, span_open, final_time));
        }
    }

    let footprints = steps
        .iter()
        .zip(&nominal_steps)
        .map(|(a, n)| FootprintRow {
            index: n.index,
            side: n.side,
            nominal_position: n.position,
            nominal_yaw: n.yaw,
            nominal_impact: n.impact_time,
            adapted_position: a.position,
            adapted_impact: a.impact_time,
            was_adapted: (a.position - n.position).norm() > ADAPTED_EPS
                || (a.step_duration - n.step_duration).abs() > ADAPTED_EPS,
        })
        .collect();

    Ok(SimLog {
        rows,
        footprints,
        fell,
        fall_time,
        mean_cycle_seconds: if adapter_cycles > 0 {
            adapter_time / adapter_cycles as f64
        } else {
            0.0
        },
        adapter_cycles,
        infeasible_cycles,
        phase_spans,
        touchdowns,
        duration: final_time,
    })
}
