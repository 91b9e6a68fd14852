//! Scenario configuration: everything a closed-loop run needs, loadable
//! from JSON. Unknown keys are rejected so typos fail loudly instead of
//! silently falling back to defaults.

use crate::adapter::{AdapterWeights, FootRect};
use crate::controller::ControllerGains;
use crate::footstep::{PathSpec, UnicycleParams};
use crate::geometry::PlanarVec;
use crate::lip::LipParams;
use crate::sim::PushEvent;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("invalid scenario: {0}")]
    Invalid(String),
}

/// Reduced-model physical parameters as they appear in a config file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelConfig {
    pub mass: f64,
    pub com_height: f64,
    pub gravity: f64,
}

impl Default for ModelConfig {
    fn default() -> Self {
        let p = LipParams::default();
        Self {
            mass: p.mass,
            com_height: p.com_height,
            gravity: p.gravity,
        }
    }
}

impl ModelConfig {
    pub fn to_params(self) -> Result<LipParams, ConfigError> {
        LipParams::new(self.mass, self.com_height, self.gravity)
            .map_err(|e| ConfigError::Invalid(e.to_string()))
    }
}

fn default_dt() -> f64 {
    0.01
}
fn default_true() -> bool {
    true
}
fn default_settle() -> f64 {
    1.0
}
fn default_fall_radius() -> f64 {
    0.5
}
fn default_apex() -> f64 {
    0.03
}
fn default_min_remaining() -> f64 {
    0.05
}
fn default_support_half_extents() -> PlanarVec {
    // Half the 19 cm x 9 cm foot.
    PlanarVec::new(0.095, 0.045)
}

/// A complete scenario description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    /// Free-text note carried along with the scenario file.
    #[serde(default)]
    pub description: Option<String>,
    pub path: PathSpec,
    #[serde(default)]
    pub model: ModelConfig,
    #[serde(default)]
    pub unicycle: UnicycleParams,
    #[serde(default)]
    pub gains: ControllerGains,
    #[serde(default)]
    pub weights: AdapterWeights,
    #[serde(default)]
    pub foot_rect: FootRect,
    /// Double support duration (s); defaults to a fifth of the nominal
    /// step duration.
    #[serde(default)]
    pub ds_duration: Option<f64>,
    /// Control period (s).
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default)]
    pub pushes: Vec<PushEvent>,
    #[serde(default = "default_true")]
    pub adapter_enabled: bool,
    /// Prefix prepended to output file names.
    #[serde(default)]
    pub output_prefix: String,
    /// Extra simulated time after the final step (s).
    #[serde(default = "default_settle")]
    pub settle_duration: f64,
    /// DCM distance from the stance anchor that counts as a fall (m).
    #[serde(default = "default_fall_radius")]
    pub fall_radius: f64,
    /// Swing foot apex height (m).
    #[serde(default = "default_apex")]
    pub apex_height: f64,
    /// Refresh the nominal DCM offset from the adapted step sequence each
    /// cycle (true) or freeze it at single-support start (false).
    #[serde(default = "default_true")]
    pub refresh_gamma_nom: bool,
    /// Floor on the remaining single-support time the adapter may command (s).
    #[serde(default = "default_min_remaining")]
    pub min_remaining: f64,
    /// Half extents of the support region the commanded VRP is clamped to,
    /// in the foot frame (m).
    #[serde(default = "default_support_half_extents")]
    pub support_half_extents: PlanarVec,
}

impl ScenarioConfig {
    /// Minimal scenario over a path, everything else at defaults.
    pub fn new(path: PathSpec) -> Self {
        Self {
            description: None,
            path,
            model: ModelConfig::default(),
            unicycle: UnicycleParams::default(),
            gains: ControllerGains::default(),
            weights: AdapterWeights::default(),
            foot_rect: FootRect::default(),
            ds_duration: None,
            dt: default_dt(),
            pushes: Vec::new(),
            adapter_enabled: true,
            output_prefix: String::new(),
            settle_duration: default_settle(),
            fall_radius: default_fall_radius(),
            apex_height: default_apex(),
            refresh_gamma_nom: true,
            min_remaining: default_min_remaining(),
            support_half_extents: default_support_half_extents(),
        }
    }

    /// Effective double-support duration.
    pub fn ds(&self) -> f64 {
        self.ds_duration
            .unwrap_or(0.2 * self.unicycle.nominal_step_duration)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let invalid = |m: &str| Err(ConfigError::Invalid(m.to_string()));
        self.path
            .validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        self.model.to_params()?;
        self.unicycle
            .validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        self.gains
            .validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        self.weights
            .validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        if !(self.dt > 0.0 && self.dt < 1.0) {
            return invalid("dt must be in (0, 1)");
        }
        if !(self.ds() > 0.0 && self.ds() < self.unicycle.t_min) {
            return invalid("ds_duration must be positive and below t_min");
        }
        if self.settle_duration < 0.0 {
            return invalid("settle_duration must be non-negative");
        }
        if !(self.fall_radius > 0.0) {
            return invalid("fall_radius must be positive");
        }
        if self.apex_height < 0.0 {
            return invalid("apex_height must be non-negative");
        }
        if !(self.min_remaining > 0.0) {
            return invalid("min_remaining must be positive");
        }
        if !(self.support_half_extents.x > 0.0 && self.support_half_extents.y > 0.0) {
            return invalid("support_half_extents must be positive");
        }
        if !(self.foot_rect.sagittal > 0.0
            && self.foot_rect.lateral_min >= 0.0
            && self.foot_rect.lateral_min < self.foot_rect.lateral_max)
        {
            return invalid("foot_rect must satisfy 0 <= lateral_min < lateral_max, sagittal > 0");
        }
        for (i, p) in self.pushes.iter().enumerate() {
            if !(p.duration > 0.0) {
                return invalid(&format!("push #{i}: duration must be positive"));
            }
            if p.t_start < 0.0 || !p.force.is_finite() {
                return invalid(&format!("push #{i}: bad start time or force"));
            }
        }
        Ok(())
    }
}
