//! Unicycle-based footstep planning.
//!
//! The robot is approximated as a unicycle whose wheels are the feet: a
//! path is sampled at candidate impact times, each sample becomes a swing
//! target offset laterally from the unicycle pose, and candidate steps
//! that violate the duration or length bounds are repaired (durations
//! clamped, long steps subdivided) until the sequence is feasible.

use crate::geometry::PlanarVec;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum FootstepError {
    #[error("path speed must be positive, got {0}")]
    NonPositiveSpeed(f64),
    #[error("path geometry must be non-negative (length) / positive (radius)")]
    BadGeometry,
    #[error("path requires yaw rate {required} rad/s above the limit {limit}")]
    YawRateExceeded { required: f64, limit: f64 },
    #[error("invalid unicycle parameters: {0}")]
    BadParams(&'static str),
    #[error("no feasible footstep sequence under the bounds: {0}")]
    NoFeasibleSequence(&'static str),
    #[error("sample sequence must be non-empty and ordered in time")]
    BadSamples,
}

/// Which foot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }

    /// Sign of the lateral offset from the unicycle pose (+y is left).
    pub fn lateral_sign(self) -> f64 {
        match self {
            Side::Left => 1.0,
            Side::Right => -1.0,
        }
    }
}

/// A planned foot placement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Footstep {
    pub index: usize,
    pub side: Side,
    /// Foot center in the world frame (m).
    pub position: PlanarVec,
    /// Foot orientation (rad).
    pub yaw: f64,
    /// Time the swing foot impacts the ground, from gait start (s).
    pub impact_time: f64,
    /// Time since the previous impact (s); zero for the initial pair.
    pub step_duration: f64,
}

/// Bounds and geometry for the unicycle planner.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnicycleParams {
    /// Half hip width: lateral distance from unicycle pose to each foot (m).
    pub foot_lateral_offset: f64,
    /// Preferred step duration (s).
    pub nominal_step_duration: f64,
    /// Shortest / longest admissible step duration (s).
    pub t_min: f64,
    pub t_max: f64,
    /// Shortest / longest admissible distance between consecutive
    /// footsteps (m).
    pub l_min: f64,
    pub l_max: f64,
    /// Largest admissible unicycle yaw rate (rad/s).
    pub max_yaw_rate: f64,
}

impl Default for UnicycleParams {
    fn default() -> Self {
        Self {
            foot_lateral_offset: 0.08,
            nominal_step_duration: 0.53,
            t_min: 0.30,
            t_max: 1.0,
            l_min: 0.0,
            l_max: 0.25,
            max_yaw_rate: 1.0,
        }
    }
}

impl UnicycleParams {
    pub fn validate(&self) -> Result<(), FootstepError> {
        if !(self.t_min > 0.0 && self.t_min <= self.nominal_step_duration) {
            return Err(FootstepError::BadParams(
                "need 0 < t_min <= nominal_step_duration",
            ));
        }
        if self.nominal_step_duration > self.t_max {
            return Err(FootstepError::BadParams(
                "need nominal_step_duration <= t_max",
            ));
        }
        if !(self.l_min >= 0.0 && self.l_min < self.l_max) {
            return Err(FootstepError::BadParams("need 0 <= l_min < l_max"));
        }
        if !(self.foot_lateral_offset > 0.0) {
            return Err(FootstepError::BadParams("need foot_lateral_offset > 0"));
        }
        if !(self.max_yaw_rate > 0.0) {
            return Err(FootstepError::BadParams("need max_yaw_rate > 0"));
        }
        Ok(())
    }
}

/// Reference path for the walk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum PathSpec {
    StraightLine { length: f64, speed: f64 },
    CircularArc { radius: f64, arc_angle: f64, speed: f64 },
}

impl PathSpec {
    fn speed(&self) -> f64 {
        match *self {
            PathSpec::StraightLine { speed, .. } => speed,
            PathSpec::CircularArc { speed, .. } => speed,
        }
    }

    /// Total arc length of the path (m).
    fn arc_length(&self) -> f64 {
        match *self {
            PathSpec::StraightLine { length, .. } => length,
            PathSpec::CircularArc {
                radius, arc_angle, ..
            } => radius * arc_angle.abs(),
        }
    }

    pub fn validate(&self) -> Result<(), FootstepError> {
        if !(self.speed() > 0.0) {
            return Err(FootstepError::NonPositiveSpeed(self.speed()));
        }
        match *self {
            PathSpec::StraightLine { length, .. } if length < 0.0 => {
                Err(FootstepError::BadGeometry)
            }
            PathSpec::CircularArc { radius, .. } if radius <= 0.0 => {
                Err(FootstepError::BadGeometry)
            }
            _ => Ok(()),
        }
    }

    /// Pose at time `t` along the path (position, yaw).
    fn pose_at(&self, t: f64) -> (PlanarVec, f64) {
        match *self {
            PathSpec::StraightLine { length, speed } => {
                let s = (speed * t).min(length);
                (PlanarVec::new(s, 0.0), 0.0)
            }
            PathSpec::CircularArc {
                radius,
                arc_angle,
                speed,
            } => {
                let sign = if arc_angle >= 0.0 { 1.0 } else { -1.0 };
                let theta = (speed * t / radius).min(arc_angle.abs());
                let pos = PlanarVec::new(radius * theta.sin(), sign * radius * (1.0 - theta.cos()));
                (pos, sign * theta)
            }
        }
    }
}

/// One sampled unicycle pose with its candidate impact time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnicycleSample {
    pub position: PlanarVec,
    pub yaw: f64,
    pub time: f64,
}

/// Sample the path at candidate impact times (uniform grid of the nominal
/// step duration, endpoint always included). The first sample is the
/// start pose at time zero.
pub fn sample_unicycle(
    path: &PathSpec,
    params: &UnicycleParams,
) -> Result<Vec<UnicycleSample>, FootstepError> {
    path.validate()?;
    params.validate()?;
    if let PathSpec::CircularArc { radius, .. } = *path {
        let required = path.speed() / radius;
        if required > params.max_yaw_rate {
            return Err(FootstepError::YawRateExceeded {
                required,
                limit: params.max_yaw_rate,
            });
        }
    }

    let total_time = path.arc_length() / path.speed();
    let mut samples = Vec::new();
    let (p0, y0) = path.pose_at(0.0);
    samples.push(UnicycleSample {
        position: p0,
        yaw: y0,
        time: 0.0,
    });
    if total_time <= 0.0 {
        return Ok(samples);
    }
    let mut k = 1usize;
    loop {
        let t = k as f64 * params.nominal_step_duration;
        // Leave room for a final step of at least t_min.
        if t > total_time - params.t_min {
            break;
        }
        let (pos, yaw) = path.pose_at(t);
        samples.push(UnicycleSample {
            position: pos,
            yaw,
            time: t,
        });
        k += 1;
    }
    let (pos, yaw) = path.pose_at(total_time);
    samples.push(UnicycleSample {
        position: pos,
        yaw,
        time: total_time,
    });
    Ok(samples)
}

fn foot_offset(sample: &UnicycleSample, side: Side, offset: f64) -> PlanarVec {
    sample.position + PlanarVec::new(0.0, side.lateral_sign() * offset).rotated(sample.yaw)
}

/// Foot positions of the candidate chain: the initial right foot at the
/// start pose, then alternating swing targets (left first).
fn candidate_positions(samples: &[UnicycleSample], offset: f64) -> Vec<PlanarVec> {
    let mut side = Side::Left;
    let mut out = Vec::with_capacity(samples.len());
    out.push(foot_offset(&samples[0], Side::Right, offset));
    for s in &samples[1..] {
        out.push(foot_offset(s, side, offset));
        side = side.opposite();
    }
    out
}

/// Turn unicycle samples into an alternating footstep sequence satisfying
/// the duration and length bounds. The first two footsteps are the
/// initial stance pair at time zero.
pub fn plan_footsteps(
    samples: &[UnicycleSample],
    params: &UnicycleParams,
) -> Result<Vec<Footstep>, FootstepError> {
    params.validate()?;
    if samples.is_empty() || samples.windows(2).any(|w| w[1].time <= w[0].time) {
        return Err(FootstepError::BadSamples);
    }
    let d = params.foot_lateral_offset;
    if 2.0 * d > params.l_max {
        return Err(FootstepError::NoFeasibleSequence(
            "stance width exceeds l_max",
        ));
    }

    // Subdivide sample intervals until no candidate step is longer than
    // l_max. Sides are reassigned from scratch after every split because
    // an insertion flips the parity of everything after it.
    let mut work: Vec<UnicycleSample> = samples.to_vec();
    let mut splits = 0usize;
    'outer: loop {
        let positions = candidate_positions(&work, d);
        for i in 0..positions.len().saturating_sub(1) {
            let len = (positions[i + 1] - positions[i]).norm();
            if len > params.l_max {
                if splits >= 64 {
                    return Err(FootstepError::NoFeasibleSequence(
                        "subdivision limit reached",
                    ));
                }
                // Candidate pair (i, i+1) maps onto sample interval
                // (i, i+1): bisect it.
                let a = work[i];
                let b = work[i + 1];
                work.insert(
                    i + 1,
                    UnicycleSample {
                        position: (a.position + b.position) * 0.5,
                        yaw: 0.5 * (a.yaw + b.yaw),
                        time: 0.5 * (a.time + b.time),
                    },
                );
                splits += 1;
                continue 'outer;
            }
        }
        break;
    }

    // Assemble footsteps: initial pair then alternating swing targets,
    // with durations clamped into [t_min, t_max].
    let mut steps = Vec::with_capacity(work.len() + 1);
    steps.push(Footstep {
        index: 0,
        side: Side::Left,
        position: foot_offset(&work[0], Side::Left, d),
        yaw: work[0].yaw,
        impact_time: 0.0,
        step_duration: 0.0,
    });
    steps.push(Footstep {
        index: 1,
        side: Side::Right,
        position: foot_offset(&work[0], Side::Right, d),
        yaw: work[0].yaw,
        impact_time: 0.0,
        step_duration: 0.0,
    });

    let mut side = Side::Left; // first swing foot
    let mut prev_impact = 0.0;
    let mut prev_sample_time = 0.0;
    for (j, sample) in work.iter().enumerate().skip(1) {
        let raw = sample.time - prev_sample_time;
        let duration = raw.clamp(params.t_min, params.t_max);
        let impact = prev_impact + duration;
        steps.push(Footstep {
            index: j + 1,
            side,
            position: foot_offset(sample, side, d),
            yaw: sample.yaw,
            impact_time: impact,
            step_duration: duration,
        });
        side = side.opposite();
        prev_impact = impact;
        prev_sample_time = sample.time;
    }

    for w in steps.windows(2) {
        let len = (w[1].position - w[0].position).norm();
        if len < params.l_min {
            return Err(FootstepError::NoFeasibleSequence(
                "step shorter than l_min, cannot repair",
            ));
        }
        if len > params.l_max + 1e-12 {
            return Err(FootstepError::NoFeasibleSequence(
                "step longer than l_max after repair",
            ));
        }
    }
    Ok(steps)
}
