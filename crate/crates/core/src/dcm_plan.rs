//! Nominal DCM trajectory generation from a footstep sequence.
//!
//! Each single support phase follows the exponential
//! `xi(t) = r_zmp + e^{t/b} (xi_ios - r_zmp)` with the ZMP anchored at the
//! stance-foot center. Boundary values come from a backward recursion that
//! pins the final DCM to the final ZMP and propagates initial/end-of-step
//! values toward the present. Instantaneous stance transitions would make
//! the ZMP reference jump, so a cubic double-support segment follows each
//! touchdown, matching position and velocity at both of its ends; that
//! keeps the reconstructed ZMP `xi - b xi_dot` continuous. The smoothing
//! window sits after the impact, when both feet are actually on the
//! ground, and eats the head of the incoming step so total step timing is
//! unchanged; the plan's DCM at every touchdown instant is the exact
//! recursion boundary value.

use crate::footstep::Footstep;
use crate::geometry::PlanarVec;
use crate::lip::LipParams;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PlanError {
    #[error("need at least two ZMP points, got {0}")]
    TooFewZmpPoints(usize),
    #[error("durations must be positive and match the ZMP points")]
    BadDurations,
    #[error("time {t} outside segment domain [0, {duration}]")]
    OutOfDomain { t: f64, duration: f64 },
    #[error("double support duration {ds} invalid for adjacent durations {prev} / {next}")]
    DsTooLong { ds: f64, prev: f64, next: f64 },
    #[error("invalid footstep sequence: {0}")]
    BadFootsteps(&'static str),
}

/// Single-support DCM segment: exponential from `xi_ios` to `xi_eos`
/// about the stance ZMP.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SsSegment {
    /// Stance ZMP anchor (m).
    pub zmp: PlanarVec,
    /// DCM at the start of the step (m).
    pub xi_ios: PlanarVec,
    /// DCM at the end of the step (m).
    pub xi_eos: PlanarVec,
    /// Step duration (s).
    pub duration: f64,
}

impl SsSegment {
    /// Build from the initial DCM value; the end value follows from the
    /// exponential.
    pub fn from_ios(zmp: PlanarVec, xi_ios: PlanarVec, duration: f64, params: &LipParams) -> Self {
        let b = params.time_constant();
        let xi_eos = zmp + (xi_ios - zmp) * (duration / b).exp();
        Self {
            zmp,
            xi_ios,
            xi_eos,
            duration,
        }
    }

    /// Build from the end DCM value (one backward-recursion step).
    pub fn from_eos(zmp: PlanarVec, xi_eos: PlanarVec, duration: f64, params: &LipParams) -> Self {
        let b = params.time_constant();
        let xi_ios = zmp + (xi_eos - zmp) * (-duration / b).exp();
        Self {
            zmp,
            xi_ios,
            xi_eos,
            duration,
        }
    }

    /// Constant segment at an equilibrium point (DCM resting on the ZMP).
    pub fn equilibrium(point: PlanarVec, duration: f64) -> Self {
        Self {
            zmp: point,
            xi_ios: point,
            xi_eos: point,
            duration,
        }
    }
}

/// Evaluate a single-support segment at `0 <= t <= duration`:
/// position per the exponential, velocity `(xi - zmp)/b`.
pub fn eval_ss(
    segment: &SsSegment,
    t: f64,
    params: &LipParams,
) -> Result<(PlanarVec, PlanarVec), PlanError> {
    if t < 0.0 || t > segment.duration {
        return Err(PlanError::OutOfDomain {
            t,
            duration: segment.duration,
        });
    }
    Ok(eval_ss_unchecked(segment, t, params))
}

fn eval_ss_unchecked(segment: &SsSegment, t: f64, params: &LipParams) -> (PlanarVec, PlanarVec) {
    let b = params.time_constant();
    let xi = segment.zmp + (segment.xi_ios - segment.zmp) * (t / b).exp();
    let xi_dot = (xi - segment.zmp) / b;
    (xi, xi_dot)
}

/// Cubic double-support segment `h(s) = c0 + c1 s + c2 s^2 + c3 s^3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DsSegment {
    pub coeffs: [PlanarVec; 4],
    pub duration: f64,
}

impl DsSegment {
    /// Cubic Hermite interpolant matching position and velocity at both
    /// ends.
    pub fn from_boundary(
        p0: PlanarVec,
        v0: PlanarVec,
        p1: PlanarVec,
        v1: PlanarVec,
        duration: f64,
    ) -> Self {
        let d = duration;
        let c2 = ((p1 - p0) * 3.0 - (v0 * 2.0 + v1) * d) / (d * d);
        let c3 = ((p0 - p1) * 2.0 + (v0 + v1) * d) / (d * d * d);
        Self {
            coeffs: [p0, v0, c2, c3],
            duration,
        }
    }

    pub fn eval(&self, s: f64) -> (PlanarVec, PlanarVec) {
        let [c0, c1, c2, c3] = self.coeffs;
        let pos = c0 + c1 * s + c2 * (s * s) + c3 * (s * s * s);
        let vel = c1 + c2 * (2.0 * s) + c3 * (3.0 * s * s);
        (pos, vel)
    }
}

/// Backward recursion over the ZMP anchors: the final end-of-step DCM
/// equals the last ZMP point, every earlier boundary follows from
/// `xi_ios = r + e^{-t/b} (xi_eos - r)`.
///
/// `zmp_points` holds the per-phase anchors followed by the terminal ZMP;
/// `durations` holds one entry per phase. Returns `(xi_ios, xi_eos)` per
/// phase.
pub fn backward_recursion(
    zmp_points: &[PlanarVec],
    durations: &[f64],
    params: &LipParams,
) -> Result<Vec<(PlanarVec, PlanarVec)>, PlanError> {
    if zmp_points.len() < 2 {
        return Err(PlanError::TooFewZmpPoints(zmp_points.len()));
    }
    if durations.len() != zmp_points.len() - 1 || durations.iter().any(|&d| !(d > 0.0)) {
        return Err(PlanError::BadDurations);
    }
    let phases = durations.len();
    let mut out = vec![(PlanarVec::ZERO, PlanarVec::ZERO); phases];
    let mut eos = zmp_points[phases];
    for i in (0..phases).rev() {
        let seg = SsSegment::from_eos(zmp_points[i], eos, durations[i], params);
        out[i] = (seg.xi_ios, seg.xi_eos);
        eos = seg.xi_ios;
    }
    Ok(out)
}

/// Cubic joining two single-support segments across their transition.
/// The boundary states are the segments' values half a double-support
/// duration before/after the nominal instantaneous switch.
pub fn smooth_ds(
    prev: &SsSegment,
    next: &SsSegment,
    ds_duration: f64,
    params: &LipParams,
) -> Result<DsSegment, PlanError> {
    if !(ds_duration > 0.0) || ds_duration > prev.duration || ds_duration > next.duration {
        return Err(PlanError::DsTooLong {
            ds: ds_duration,
            prev: prev.duration,
            next: next.duration,
        });
    }
    let half = 0.5 * ds_duration;
    let (p0, v0) = eval_ss_unchecked(prev, prev.duration - half, params);
    let (p1, v1) = eval_ss_unchecked(next, half, params);
    Ok(DsSegment::from_boundary(p0, v0, p1, v1, ds_duration))
}

/// One reference sample of a plan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanSample {
    pub xi: PlanarVec,
    pub xi_dot: PlanarVec,
    /// Reconstructed ZMP reference `xi - b xi_dot`.
    pub zmp: PlanarVec,
}

#[derive(Debug, Clone, PartialEq)]
enum PieceKind {
    /// Window into a single-support segment starting at local time
    /// `offset`.
    Ss { segment: SsSegment, offset: f64 },
    Ds(DsSegment),
}

#[derive(Debug, Clone, PartialEq)]
struct PlanPiece {
    start: f64,
    end: f64,
    kind: PieceKind,
}

/// Piecewise DCM reference trajectory.
///
/// Evaluation before the start clamps to the initial sample; evaluation
/// past the end returns the terminal equilibrium (DCM resting on the
/// final ZMP).
#[derive(Debug, Clone, PartialEq)]
pub struct DcmPlan {
    pieces: Vec<PlanPiece>,
    start_time: f64,
    end_time: f64,
    terminal: PlanarVec,
    time_constant: f64,
}

impl DcmPlan {
    pub fn start_time(&self) -> f64 {
        self.start_time
    }

    /// Time at which the plan settles on the terminal equilibrium.
    pub fn end_time(&self) -> f64 {
        self.end_time
    }

    pub fn total_duration(&self) -> f64 {
        self.end_time - self.start_time
    }

    /// Final ZMP point: the plan's DCM converges here exactly.
    pub fn terminal_point(&self) -> PlanarVec {
        self.terminal
    }

    /// Reference sample at absolute time `t`.
    pub fn sample(&self, t: f64, params: &LipParams) -> PlanSample {
        let b = params.time_constant();
        let (xi, xi_dot) = self.eval_raw(t, params);
        PlanSample {
            xi,
            xi_dot,
            zmp: xi - xi_dot * b,
        }
    }

    fn eval_raw(&self, t: f64, params: &LipParams) -> (PlanarVec, PlanarVec) {
        if self.pieces.is_empty() || t >= self.end_time {
            return (self.terminal, PlanarVec::ZERO);
        }
        let t = t.max(self.start_time);
        // Pieces are contiguous and sorted; find the one containing t.
        let idx = match self
            .pieces
            .binary_search_by(|p| p.start.partial_cmp(&t).unwrap())
        {
            Ok(i) => i,
            Err(0) => 0,
            Err(i) => i - 1,
        };
        let piece = &self.pieces[idx];
        let local = (t - piece.start).min(piece.end - piece.start);
        match &piece.kind {
            PieceKind::Ss { segment, offset } => eval_ss_unchecked(segment, offset + local, params),
            PieceKind::Ds(ds) => ds.eval(local),
        }
    }

    /// Absolute boundary times between pieces (for continuity checks).
    pub fn piece_boundaries(&self) -> Vec<f64> {
        self.pieces.iter().skip(1).map(|p| p.start).collect()
    }

    /// One-sided samples around an absolute time (limit from below,
    /// limit from above), for junction continuity checks.
    pub fn one_sided(&self, t: f64, params: &LipParams) -> (PlanSample, PlanSample) {
        let eps = 1e-12;
        (self.sample(t - eps, params), self.sample(t + eps, params))
    }
}

/// A single-support phase with its absolute start time, ready for
/// assembly into a plan.
#[derive(Debug, Clone, Copy)]
pub(crate) struct TimedSegment {
    pub start: f64,
    pub segment: SsSegment,
}

/// Assemble contiguous single-support segments plus a terminal
/// equilibrium into a plan. Each junction between consecutive segments is
/// bridged by a cubic straddling it by half the double-support duration
/// on each side, exactly the boundary states [`smooth_ds`] uses. The
/// physical double support therefore spans `[J - ds/2, J + ds/2]` around
/// each recursion junction `J`; callers place touchdowns at `J - ds/2`.
pub(crate) fn assemble_plan(
    segments: &[TimedSegment],
    terminal: PlanarVec,
    ds_duration: f64,
    params: &LipParams,
) -> Result<DcmPlan, PlanError> {
    let b = params.time_constant();
    if segments.is_empty() {
        return Ok(DcmPlan {
            pieces: Vec::new(),
            start_time: 0.0,
            end_time: 0.0,
            terminal,
            time_constant: b,
        });
    }
    if !(ds_duration > 0.0) {
        return Err(PlanError::DsTooLong {
            ds: ds_duration,
            prev: f64::NAN,
            next: f64::NAN,
        });
    }
    let half = 0.5 * ds_duration;
    let start_time = segments[0].start;
    let mut pieces = Vec::new();
    let mut cursor = start_time;
    for (k, ts) in segments.iter().enumerate() {
        let junction = ts.start + ts.segment.duration;
        // The cubic needs half a window on each side of the junction.
        let lead = half.min(junction - cursor);
        if lead <= 0.0 {
            return Err(PlanError::DsTooLong {
                ds: ds_duration,
                prev: ts.segment.duration,
                next: f64::NAN,
            });
        }
        let ss_end = junction - lead;
        if ss_end > cursor + 1e-15 {
            pieces.push(PlanPiece {
                start: cursor,
                end: ss_end,
                kind: PieceKind::Ss {
                    segment: ts.segment,
                    offset: cursor - ts.start,
                },
            });
        }
        let (p0, v0) = eval_ss_unchecked(&ts.segment, ts.segment.duration - lead, params);
        let (p1, v1, trail) = match segments.get(k + 1) {
            Some(next) => {
                if half > next.segment.duration {
                    return Err(PlanError::DsTooLong {
                        ds: ds_duration,
                        prev: ts.segment.duration,
                        next: next.segment.duration,
                    });
                }
                let (p, v) = eval_ss_unchecked(&next.segment, half, params);
                (p, v, half)
            }
            None => (terminal, PlanarVec::ZERO, half),
        };
        let ds = DsSegment::from_boundary(p0, v0, p1, v1, lead + trail);
        pieces.push(PlanPiece {
            start: ss_end,
            end: ss_end + ds.duration,
            kind: PieceKind::Ds(ds),
        });
        cursor = ss_end + ds.duration;
    }
    Ok(DcmPlan {
        pieces,
        start_time,
        end_time: cursor,
        terminal,
        time_constant: b,
    })
}

fn validate_footsteps(footsteps: &[Footstep]) -> Result<(), PlanError> {
    if footsteps.len() < 2 {
        return Err(PlanError::BadFootsteps("need the initial stance pair"));
    }
    if footsteps[0].impact_time != 0.0 || footsteps[1].impact_time != 0.0 {
        return Err(PlanError::BadFootsteps("initial pair must be at time zero"));
    }
    for w in footsteps[1..].windows(2) {
        if w[1].impact_time <= w[0].impact_time {
            return Err(PlanError::BadFootsteps("impact times must increase"));
        }
        if w[1].side != w[0].side.opposite() {
            return Err(PlanError::BadFootsteps("sides must alternate"));
        }
    }
    Ok(())
}

/// Terminal ZMP: center of the final stance pair.
pub fn terminal_zmp(footsteps: &[Footstep]) -> PlanarVec {
    let n = footsteps.len();
    (footsteps[n - 1].position + footsteps[n - 2].position) * 0.5
}

/// Build the nominal DCM plan for a footstep sequence. ZMP anchors sit at
/// the stance-foot centers; the plan ends at the midpoint of the final
/// stance pair.
///
/// Footstep impact times mark physical touchdowns (start of double
/// support), so each exponential phase's recursion junction sits half a
/// double-support window later; the opening phase starts at time zero.
pub fn build_plan(
    footsteps: &[Footstep],
    ds_duration: f64,
    params: &LipParams,
) -> Result<DcmPlan, PlanError> {
    validate_footsteps(footsteps)?;
    let terminal = terminal_zmp(footsteps);
    let phases = footsteps.len() - 2;
    if phases == 0 {
        return assemble_plan(&[], terminal, ds_duration.max(1e-3), params)
            .map(|mut plan| {
                plan.terminal = terminal;
                plan
            });
    }
    let half = 0.5 * ds_duration;
    // Phase p swings footstep p+2; its domain runs junction-to-junction,
    // J_k = impact_k + ds/2, except the first phase which opens at zero.
    let domain_start =
        |p: usize| -> f64 { if p == 0 { 0.0 } else { footsteps[p + 1].impact_time + half } };
    let mut zmp_points = Vec::with_capacity(phases + 1);
    let mut durations = Vec::with_capacity(phases);
    for p in 0..phases {
        zmp_points.push(footsteps[p + 1].position);
        durations.push(footsteps[p + 2].impact_time + half - domain_start(p));
    }
    zmp_points.push(terminal);
    if ds_duration > durations.iter().cloned().fold(f64::INFINITY, f64::min) {
        return Err(PlanError::DsTooLong {
            ds: ds_duration,
            prev: durations.iter().cloned().fold(f64::INFINITY, f64::min),
            next: f64::NAN,
        });
    }
    let boundaries = backward_recursion(&zmp_points, &durations, params)?;
    let mut segments = Vec::with_capacity(phases);
    for p in 0..phases {
        segments.push(TimedSegment {
            start: domain_start(p),
            segment: SsSegment {
                zmp: zmp_points[p],
                xi_ios: boundaries[p].0,
                xi_eos: boundaries[p].1,
                duration: durations[p],
            },
        });
    }
    assemble_plan(&segments, terminal, ds_duration, params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::footstep::{plan_footsteps, sample_unicycle, PathSpec, Side, UnicycleParams};

    fn params() -> LipParams {
        LipParams::from_time_constant(0.2325, 9.81, 33.0).unwrap()
    }

    fn straight_steps(length: f64) -> Vec<Footstep> {
        let up = UnicycleParams::default();
        let samples = sample_unicycle(
            &PathSpec::StraightLine {
                length,
                speed: 0.28,
            },
            &up,
        )
        .unwrap();
        plan_footsteps(&samples, &up).unwrap()
    }

    #[test]
    fn recursion_single_step_ends_on_last_zmp() {
        let p = params();
        let r_n = PlanarVec::new(0.3, -0.1);
        let out = backward_recursion(&[PlanarVec::ZERO, r_n], &[0.53], &p).unwrap();
        assert_eq!(out.len(), 1);
        assert!((out[0].1 - r_n).norm() < 1e-15);
    }

    #[test]
    fn recursion_equilibrium_propagates() {
        let p = params();
        let pt = PlanarVec::new(0.05, 0.02);
        let out = backward_recursion(&[pt, pt, pt, pt], &[0.4, 0.5, 0.6], &p).unwrap();
        for (ios, eos) in out {
            assert!((ios - pt).norm() < 1e-15);
            assert!((eos - pt).norm() < 1e-15);
        }
    }

    #[test]
    fn recursion_rejects_bad_input() {
        let p = params();
        assert!(backward_recursion(&[], &[], &p).is_err());
        assert!(backward_recursion(&[PlanarVec::ZERO], &[], &p).is_err());
        assert!(backward_recursion(&[PlanarVec::ZERO, PlanarVec::ZERO], &[0.0], &p).is_err());
    }

    #[test]
    fn recursion_two_point_chain_matches_hand_value() {
        // Anchor at 0, terminal at 0.2, T = 0.53, b = 0.2325:
        // xi_ios = 0.2 * e^{-0.53/0.2325} ~ 0.020466.
        let p = params();
        let out = backward_recursion(
            &[PlanarVec::ZERO, PlanarVec::new(0.2, 0.0)],
            &[0.53],
            &p,
        )
        .unwrap();
        let expected = 0.2 * (-0.53f64 / 0.2325).exp();
        assert!((out[0].0.x - expected).abs() < 1e-12);
        assert!((out[0].0.x - 0.02046).abs() < 1e-4);

        // Forward RK4 integration of the DCM dynamics from xi_ios under the
        // constant anchor must land on xi_eos.
        let b = p.time_constant();
        let mut xi = out[0].0;
        let steps = 5300;
        let dt = 0.53 / steps as f64;
        for _ in 0..steps {
            let f = |x: PlanarVec| x / b; // anchor at origin
            let k1 = f(xi);
            let k2 = f(xi + k1 * (dt / 2.0));
            let k3 = f(xi + k2 * (dt / 2.0));
            let k4 = f(xi + k3 * dt);
            xi += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
        }
        assert!((xi - out[0].1).norm() < 1e-6);
    }

    #[test]
    fn eval_ss_hits_boundaries_exactly() {
        let p = params();
        let seg = SsSegment::from_eos(
            PlanarVec::new(0.1, -0.05),
            PlanarVec::new(0.25, 0.1),
            0.53,
            &p,
        );
        let (xi0, _) = eval_ss(&seg, 0.0, &p).unwrap();
        assert!((xi0 - seg.xi_ios).norm() < 1e-15);
        let (xi1, _) = eval_ss(&seg, seg.duration, &p).unwrap();
        assert!((xi1 - seg.xi_eos).norm() < 1e-12);
        assert!(eval_ss(&seg, -0.01, &p).is_err());
        assert!(eval_ss(&seg, 0.54, &p).is_err());
    }

    #[test]
    fn eval_ss_midpoint_matches_integrator() {
        let p = params();
        let b = p.time_constant();
        let seg = SsSegment::from_eos(PlanarVec::ZERO, PlanarVec::new(0.2, 0.0), 0.53, &p);
        let t_mid = 0.265;
        let mut xi = seg.xi_ios;
        let steps = 2650;
        let dt = t_mid / steps as f64;
        for _ in 0..steps {
            let f = |x: PlanarVec| (x - seg.zmp) / b;
            let k1 = f(xi);
            let k2 = f(xi + k1 * (dt / 2.0));
            let k3 = f(xi + k2 * (dt / 2.0));
            let k4 = f(xi + k3 * dt);
            xi += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
        }
        let (xi_cf, _) = eval_ss(&seg, t_mid, &p).unwrap();
        assert!((xi - xi_cf).norm() < 1e-8);
    }

    #[test]
    fn smooth_ds_constant_when_segments_at_equilibrium() {
        let p = params();
        let pt = PlanarVec::new(0.07, 0.01);
        let a = SsSegment::equilibrium(pt, 0.5);
        let b = SsSegment::equilibrium(pt, 0.5);
        let ds = smooth_ds(&a, &b, 0.2, &p).unwrap();
        for s in [0.0, 0.05, 0.1, 0.2] {
            let (pos, vel) = ds.eval(s);
            assert!((pos - pt).norm() < 1e-14);
            assert!(vel.norm() < 1e-13);
        }
    }

    #[test]
    fn smooth_ds_reproduces_boundary_conditions() {
        let p = params();
        let prev = SsSegment::from_eos(PlanarVec::ZERO, PlanarVec::new(0.15, 0.05), 0.53, &p);
        let next = SsSegment::from_ios(
            PlanarVec::new(0.2, -0.08),
            PlanarVec::new(0.15, 0.05),
            0.53,
            &p,
        );
        let dsd = 0.106;
        let ds = smooth_ds(&prev, &next, dsd, &p).unwrap();
        let (p0, v0) = eval_ss(&prev, prev.duration - dsd / 2.0, &p).unwrap();
        let (p1, v1) = eval_ss(&next, dsd / 2.0, &p).unwrap();
        let (q0, w0) = ds.eval(0.0);
        let (q1, w1) = ds.eval(dsd);
        assert!((q0 - p0).norm() < 1e-12);
        assert!((w0 - v0).norm() < 1e-12);
        assert!((q1 - p1).norm() < 1e-12);
        assert!((w1 - v1).norm() < 1e-12);

        assert!(smooth_ds(&prev, &next, 0.6, &p).is_err());
        assert!(smooth_ds(&prev, &next, 0.0, &p).is_err());
    }

    #[test]
    fn standing_plan_is_constant_at_stance_midpoint() {
        let p = params();
        let steps = straight_steps(0.0);
        let plan = build_plan(&steps, 0.106, &p).unwrap();
        let mid = (steps[0].position + steps[1].position) * 0.5;
        for t in [0.0, 0.5, 3.0] {
            let s = plan.sample(t, &p);
            assert!((s.xi - mid).norm() < 1e-15);
            assert!(s.xi_dot.norm() < 1e-15);
            assert!((s.zmp - mid).norm() < 1e-15);
        }
    }

    #[test]
    fn final_dcm_equals_final_zmp() {
        let p = params();
        let steps = straight_steps(1.0);
        let plan = build_plan(&steps, 0.106, &p).unwrap();
        let terminal = terminal_zmp(&steps);
        let s = plan.sample(plan.end_time() + 5.0, &p);
        assert!((s.xi - terminal).norm() < 1e-12);
        assert!((s.zmp - terminal).norm() < 1e-12);
        let s_end = plan.sample(plan.end_time(), &p);
        assert!((s_end.xi - terminal).norm() < 1e-12);
    }

    #[test]
    fn junctions_are_continuous() {
        let p = params();
        let steps = straight_steps(1.5);
        let plan = build_plan(&steps, 0.106, &p).unwrap();
        for t in plan.piece_boundaries() {
            let (before, after) = plan.one_sided(t, &p);
            assert!(
                (before.xi - after.xi).norm() < 1e-9,
                "position jump at {t}: {}",
                (before.xi - after.xi).norm()
            );
            assert!(
                (before.xi_dot - after.xi_dot).norm() < 1e-9,
                "velocity jump at {t}"
            );
            assert!(
                (before.zmp - after.zmp).norm() < 1e-9,
                "zmp jump at {t}: {}",
                (before.zmp - after.zmp).norm()
            );
        }
    }

    #[test]
    fn ss_zmp_identity_holds_pointwise() {
        // During single support, xi - b*xi_dot must equal the anchor.
        let p = params();
        let b = p.time_constant();
        let steps = straight_steps(1.0);
        let plan = build_plan(&steps, 0.106, &p).unwrap();
        // Sample the middle of each nominal step where the plan is in
        // single support.
        for k in 2..steps.len() {
            let t = 0.5 * (steps[k - 1].impact_time + steps[k].impact_time);
            let s = plan.sample(t, &p);
            let anchor = steps[k - 1].position;
            let residual = s.xi_dot * b + anchor - s.xi;
            assert!(residual.norm() < 1e-10, "identity residual {}", residual.norm());
        }
    }

    #[test]
    fn ds_zmp_stays_between_anchors() {
        let p = params();
        let steps = straight_steps(1.0);
        let plan = build_plan(&steps, 0.106, &p).unwrap();
        for k in 2..steps.len() - 1 {
            let t_j = steps[k].impact_time;
            let prev_anchor = steps[k - 1].position;
            let next_anchor = steps[k].position;
            let lo = prev_anchor.min(next_anchor);
            let hi = prev_anchor.max(next_anchor);
            let mut s = t_j;
            while s <= t_j + 0.106 {
                let z = plan.sample(s, &p).zmp;
                assert!(z.x >= lo.x - 1e-9 && z.x <= hi.x + 1e-9, "zmp x {} outside [{}, {}]", z.x, lo.x, hi.x);
                assert!(z.y >= lo.y - 1e-9 && z.y <= hi.y + 1e-9, "zmp y {} outside [{}, {}]", z.y, lo.y, hi.y);
                s += 0.001;
            }
        }
    }

    #[test]
    fn plan_rebuild_is_bit_identical() {
        let p = params();
        let steps = straight_steps(1.2);
        let a = build_plan(&steps, 0.106, &p).unwrap();
        let b = build_plan(&steps, 0.106, &p).unwrap();
        let mut t = 0.0;
        while t < a.end_time() + 0.5 {
            let sa = a.sample(t, &p);
            let sb = b.sample(t, &p);
            assert_eq!(sa.xi, sb.xi);
            assert_eq!(sa.xi_dot, sb.xi_dot);
            t += 0.01;
        }
    }

    #[test]
    fn randomized_footsteps_keep_continuity() {
        use rand::{Rng, SeedableRng};
        let p = params();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..25 {
            let n_steps = rng.gen_range(3..=10);
            let mut steps = vec![
                Footstep {
                    index: 0,
                    side: Side::Left,
                    position: PlanarVec::new(0.0, 0.08),
                    yaw: 0.0,
                    impact_time: 0.0,
                    step_duration: 0.0,
                },
                Footstep {
                    index: 1,
                    side: Side::Right,
                    position: PlanarVec::new(0.0, -0.08),
                    yaw: 0.0,
                    impact_time: 0.0,
                    step_duration: 0.0,
                },
            ];
            let mut t = 0.0;
            let mut x = 0.0;
            let mut side = Side::Left;
            for k in 0..n_steps {
                let dur = rng.gen_range(0.4..0.8);
                t += dur;
                x += rng.gen_range(0.05..0.18);
                steps.push(Footstep {
                    index: k + 2,
                    side,
                    position: PlanarVec::new(x, side.lateral_sign() * 0.08),
                    yaw: 0.0,
                    impact_time: t,
                    step_duration: dur,
                });
                side = side.opposite();
            }
            let plan = build_plan(&steps, 0.1, &p).unwrap();
            for tj in plan.piece_boundaries() {
                let (before, after) = plan.one_sided(tj, &p);
                assert!((before.xi - after.xi).norm() < 1e-9);
                assert!((before.xi_dot - after.xi_dot).norm() < 1e-9);
                assert!((before.zmp - after.zmp).norm() < 1e-9);
            }
            let terminal = terminal_zmp(&steps);
            let end = plan.sample(plan.end_time() + 1.0, &p);
            assert!((end.xi - terminal).norm() < 1e-12);
        }
    }
}
