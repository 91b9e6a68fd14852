//! Scenario running, log serialization, and summary metrics.
//!
//! The binary in `main.rs` is a thin wrapper over [`run`]; keeping the
//! logic here lets integration tests drive the exact code path the CLI
//! uses.
//!
//! Output contract per run (all under the output directory, names
//! prefixed by the scenario's `output_prefix`):
//!
//! - `trajectory.csv` — per-cycle time series, columns
//!   `t, xi_x, xi_y, xi_ref_x, xi_ref_y, com_x, com_y, zmp_ref_x,
//!   zmp_ref_y, vrp_cmd_x, vrp_cmd_y, swing_x, swing_y, swing_z, phase,
//!   stance_side, push_x, push_y`.
//! - `footprints.csv` — per-footstep nominal vs adapted record, columns
//!   `index, side, nominal_x, nominal_y, nominal_yaw, nominal_impact_t,
//!   adapted_x, adapted_y, adapted_impact_t, was_adapted`.
//! - `summary.json` — aggregate metrics (see [`Summary`]).
//!
//! Floats are written with 17 significant digits so a reparse
//! reconstructs every value bit for bit.

use dcmwalk_core::footstep::Side;
use dcmwalk_core::scenario::ScenarioConfig;
use dcmwalk_core::sim::{run_closed_loop, PhaseTag, SimError, SimLog, StanceTag};
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read config {path}: {source}")]
    ReadConfig {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("config {path}:{line}:{column}: {message}")]
    ParseConfig {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid scenario in {path}: {message}")]
    InvalidConfig { path: PathBuf, message: String },
    #[error("simulation failed: {0}")]
    Sim(#[from] SimError),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot write CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("cannot write JSON: {0}")]
    Json(#[from] serde_json::Error),
}

/// Per-step entry in the summary for every adapted footstep.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct StepDelta {
    pub index: usize,
    pub side: String,
    /// Signed lateral offset of the adapted placement in the nominal
    /// footstep frame; positive is outward (away from the body midline).
    pub width_extension_m: f64,
    /// Nominal step duration minus adapted step duration; positive means
    /// the foot came down sooner.
    pub timing_reduction_s: f64,
    /// Absolute impact-time shift against the nominal timeline.
    pub impact_shift_s: f64,
}

/// Aggregate run metrics written to `summary.json`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Summary {
    pub completed: bool,
    pub fall: bool,
    pub fall_time_s: Option<f64>,
    pub adapted_step_count: usize,
    /// Mean of `width_extension_m` over adapted steps (0 when none).
    pub mean_step_width_extension_m: f64,
    /// Mean of `timing_reduction_s` over adapted steps (0 when none).
    pub mean_timing_reduction_s: f64,
    pub max_dcm_error_m: f64,
    /// Mean wall time of one adaptation cycle (QP build + solve +
    /// replan), milliseconds.
    pub mean_cycle_ms: f64,
    pub adapter_cycles: usize,
    pub infeasible_cycles: usize,
    pub simulated_s: f64,
    pub steps: Vec<StepDelta>,
}

fn side_str(side: Side) -> &'static str {
    match side {
        Side::Left => "left",
        Side::Right => "right",
    }
}

fn phase_str(tag: PhaseTag) -> &'static str {
    match tag {
        PhaseTag::Ss => "ss",
        PhaseTag::Ds => "ds",
    }
}

fn stance_str(tag: StanceTag) -> &'static str {
    match tag {
        StanceTag::Left => "left",
        StanceTag::Right => "right",
        StanceTag::Both => "both",
    }
}

/// 17 significant digits: enough for f64 round trips.
fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

/// Compute the summary metrics from a finished log.
pub fn summarize(log: &SimLog) -> Summary {
    let mut steps = Vec::new();
    for (i, fp) in log.footprints.iter().enumerate() {
        if !fp.was_adapted {
            continue;
        }
        let delta = fp.adapted_position - fp.nominal_position;
        let outward_sign = match fp.side {
            Side::Left => 1.0,
            Side::Right => -1.0,
        };
        let width_extension = delta.rotated(-fp.nominal_yaw).y * outward_sign;
        let (nominal_dur, adapted_dur) = if i == 0 {
            (0.0, 0.0)
        } else {
            let prev = &log.footprints[i - 1];
            (
                fp.nominal_impact - prev.nominal_impact,
                fp.adapted_impact - prev.adapted_impact,
            )
        };
        steps.push(StepDelta {
            index: fp.index,
            side: side_str(fp.side).to_string(),
            width_extension_m: width_extension,
            timing_reduction_s: nominal_dur - adapted_dur,
            impact_shift_s: fp.adapted_impact - fp.nominal_impact,
        });
    }
    let n = steps.len();
    let mean_width = if n > 0 {
        steps.iter().map(|s| s.width_extension_m).sum::<f64>() / n as f64
    } else {
        0.0
    };
    let mean_timing = if n > 0 {
        steps.iter().map(|s| s.timing_reduction_s).sum::<f64>() / n as f64
    } else {
        0.0
    };
    let max_err = log
        .rows
        .iter()
        .map(|r| (r.xi - r.xi_ref).norm())
        .fold(0.0f64, f64::max);
    Summary {
        completed: !log.fell,
        fall: log.fell,
        fall_time_s: log.fall_time,
        adapted_step_count: n,
        mean_step_width_extension_m: mean_width,
        mean_timing_reduction_s: mean_timing,
        max_dcm_error_m: max_err,
        mean_cycle_ms: log.mean_cycle_seconds * 1e3,
        adapter_cycles: log.adapter_cycles,
        infeasible_cycles: log.infeasible_cycles,
        simulated_s: log.duration,
        steps,
    }
}

pub fn write_trajectory_csv(log: &SimLog, path: &Path) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record([
        "t", "xi_x", "xi_y", "xi_ref_x", "xi_ref_y", "com_x", "com_y", "zmp_ref_x", "zmp_ref_y",
        "vrp_cmd_x", "vrp_cmd_y", "swing_x", "swing_y", "swing_z", "phase", "stance_side",
        "push_x", "push_y",
    ])?;
    for r in &log.rows {
        w.write_record([
            fmt(r.t),
            fmt(r.xi.x),
            fmt(r.xi.y),
            fmt(r.xi_ref.x),
            fmt(r.xi_ref.y),
            fmt(r.com.x),
            fmt(r.com.y),
            fmt(r.zmp_ref.x),
            fmt(r.zmp_ref.y),
            fmt(r.vrp_cmd.x),
            fmt(r.vrp_cmd.y),
            fmt(r.swing.x),
            fmt(r.swing.y),
            fmt(r.swing_z),
            phase_str(r.phase).to_string(),
            stance_str(r.stance).to_string(),
            fmt(r.push.x),
            fmt(r.push.y),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_footprints_csv(log: &SimLog, path: &Path) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record([
        "index",
        "side",
        "nominal_x",
        "nominal_y",
        "nominal_yaw",
        "nominal_impact_t",
        "adapted_x",
        "adapted_y",
        "adapted_impact_t",
        "was_adapted",
    ])?;
    for f in &log.footprints {
        w.write_record([
            f.index.to_string(),
            side_str(f.side).to_string(),
            fmt(f.nominal_position.x),
            fmt(f.nominal_position.y),
            fmt(f.nominal_yaw),
            fmt(f.nominal_impact),
            fmt(f.adapted_position.x),
            fmt(f.adapted_position.y),
            fmt(f.adapted_impact),
            f.was_adapted.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Load and validate a scenario file.
pub fn load_config(path: &Path) -> Result<ScenarioConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::ReadConfig {
        path: path.to_path_buf(),
        source,
    })?;
    let config: ScenarioConfig =
        serde_json::from_str(&text).map_err(|e| CliError::ParseConfig {
            path: path.to_path_buf(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
    config.validate().map_err(|e| CliError::InvalidConfig {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    Ok(config)
}

/// Result of one scenario run.
#[derive(Debug)]
pub struct RunOutcome {
    pub summary: Summary,
    pub log: SimLog,
    pub trajectory_path: PathBuf,
    pub footprints_path: PathBuf,
    pub summary_path: PathBuf,
}

/// Command-line overrides applied on top of the scenario file.
#[derive(Debug, Default, Clone, Copy)]
pub struct Overrides {
    pub dt: Option<f64>,
    pub disable_adapter: bool,
}

/// Run a scenario file end to end and write the three output files.
/// Nothing is written if the config fails to parse or validate.
pub fn run(config_path: &Path, out_dir: &Path, overrides: Overrides) -> Result<RunOutcome, CliError> {
    let mut config = load_config(config_path)?;
    if let Some(dt) = overrides.dt {
        config.dt = dt;
    }
    if overrides.disable_adapter {
        config.adapter_enabled = false;
    }
    config.validate().map_err(|e| CliError::InvalidConfig {
        path: config_path.to_path_buf(),
        message: e.to_string(),
    })?;

    let log = run_closed_loop(&config)?;
    let summary = summarize(&log);

    fs::create_dir_all(out_dir)?;
    let prefix = &config.output_prefix;
    let trajectory_path = out_dir.join(format!("{prefix}trajectory.csv"));
    let footprints_path = out_dir.join(format!("{prefix}footprints.csv"));
    let summary_path = out_dir.join(format!("{prefix}summary.json"));
    write_trajectory_csv(&log, &trajectory_path)?;
    write_footprints_csv(&log, &footprints_path)?;
    fs::write(&summary_path, serde_json::to_string_pretty(&summary)?)?;

    Ok(RunOutcome {
        summary,
        log,
        trajectory_path,
        footprints_path,
        summary_path,
    })
}
