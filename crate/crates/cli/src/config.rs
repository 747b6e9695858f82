//! Scenario configuration: JSON-backed, with every field overridable from
//! the command line. The merged configuration is what `--dump-config`
//! prints, and it round-trips: feeding the dump back in reproduces the
//! exact same effective settings.
//!
//! Validation is split in two layers. This module checks *structure*
//! (missing or contradictory fields, malformed grids and ranges — exit
//! code 2); turning validated structure into library types happens in the
//! command layer, where rejected values are *physics* errors (exit code 3).

use crate::error::CliError;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub constants: ConstantsConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<ParamsConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<CoefficientsConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial_state: Option<InitialStateConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time_grid: Option<TimeGridConfig>,
    pub sieve: SieveConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scan: Option<ScanConfig>,
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConstantsConfig {
    pub m: f64,
    pub omega: f64,
    pub hbar: f64,
}

impl Default for ConstantsConfig {
    fn default() -> Self {
        ConstantsConfig {
            m: 1.0,
            omega: 1.0,
            hbar: 1.0,
        }
    }
}

/// Friction and diffusion given directly. The required fields are `Option`
/// so a flag-only invocation can build them up piecewise; resolution
/// reports exactly which one is missing.
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ParamsConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_qq: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_pp: Option<f64>,
    pub d_pq: f64,
}

/// Lindblad-operator coefficients as `[re, im]` pairs.
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CoefficientsConfig {
    pub a1: [f64; 2],
    pub a2: [f64; 2],
    pub b1: [f64; 2],
    pub b2: [f64; 2],
}

#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InitialStateConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shape: Option<ShapeConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub covariance: Option<CovarianceConfig>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ShapeConfig {
    pub area: f64,
    pub theta: f64,
    pub aleph: f64,
}

impl Default for ShapeConfig {
    fn default() -> Self {
        ShapeConfig {
            area: 1.0,
            theta: 0.0,
            aleph: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CovarianceConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_qq: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_pp: Option<f64>,
    pub sigma_pq: f64,
}

/// Either an explicit list of times or a uniform grid `0..=t_max` with
/// `steps` intervals. `unit: "periods"` multiplies times by `2 pi / omega`.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TimeGridConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub times: Option<Vec<f64>>,
    pub unit: TimeUnit,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeUnit {
    #[default]
    Natural,
    Periods,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SieveConfig {
    pub eval_time: EvalTime,
    pub grid: GridConfig,
}

/// `"auto"` (meaning `10 / lambda`) or an explicit time.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EvalTime {
    Time(f64),
    Keyword(String),
}

impl Default for EvalTime {
    fn default() -> Self {
        EvalTime::Keyword("auto".to_owned())
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub theta_samples: usize,
    pub aleph_samples: usize,
    pub aleph_min: f64,
    pub aleph_max: f64,
    pub refine_rounds: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            theta_samples: 96,
            aleph_samples: 96,
            aleph_min: 0.05,
            aleph_max: 20.0,
            refine_rounds: 48,
        }
    }
}

/// Which parameters to sweep. Axes expand in the fixed order `lambda`,
/// `omega`, `d_qq`, `d_pp`, `d_pq` (first axis varies slowest); parameters
/// without a range hold their base value from `params` / `constants`.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScanConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<RangeConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<RangeConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_qq: Option<RangeConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_pp: Option<RangeConfig>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d_pq: Option<RangeConfig>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RangeConfig {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
    #[serde(default)]
    pub scale: ScanScale,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanScale {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    pub format: OutputFormat,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("reading {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::config(format!("parsing {}: {e}", path.display())))
    }

    /// Structural checks independent of any particular subcommand.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.params.is_some() && self.coefficients.is_some() {
            return Err(CliError::config(
                "params and coefficients are mutually exclusive; give exactly one",
            ));
        }
        if let Some(initial) = &self.initial_state {
            match (initial.shape.is_some(), initial.covariance.is_some()) {
                (true, true) => {
                    return Err(CliError::config(
                        "initial_state.shape and initial_state.covariance are mutually \
                         exclusive; give exactly one",
                    ))
                }
                (false, false) => {
                    return Err(CliError::config(
                        "initial_state needs either shape or covariance",
                    ))
                }
                _ => {}
            }
        }
        if let Some(grid) = &self.time_grid {
            grid.validate()?;
        }
        self.sieve.validate()?;
        if let Some(scan) = &self.scan {
            scan.validate()?;
        }
        Ok(())
    }
}

impl TimeGridConfig {
    fn validate(&self) -> Result<(), CliError> {
        match (&self.times, self.t_max, self.steps) {
            (Some(times), None, None) => {
                if times.is_empty() {
                    return Err(CliError::config("time_grid.times must not be empty"));
                }
                for &t in times {
                    if !t.is_finite() || t < 0.0 {
                        return Err(CliError::config(format!(
                            "time_grid.times entries must be finite and >= 0 (got {t})"
                        )));
                    }
                }
                Ok(())
            }
            (None, Some(t_max), Some(steps)) => {
                if !(t_max > 0.0) || !t_max.is_finite() {
                    return Err(CliError::config(format!(
                        "time_grid.t_max must be finite and > 0 (got {t_max})"
                    )));
                }
                if steps == 0 {
                    return Err(CliError::config("time_grid.steps must be >= 1"));
                }
                Ok(())
            }
            (None, None, None) => Err(CliError::config(
                "time_grid needs either times or t_max with steps",
            )),
            (None, Some(_), None) => Err(CliError::config(
                "time_grid.steps is required alongside t_max",
            )),
            (None, None, Some(_)) => Err(CliError::config(
                "time_grid.t_max is required alongside steps",
            )),
            (Some(_), _, _) => Err(CliError::config(
                "time_grid.times is mutually exclusive with t_max/steps",
            )),
        }
    }

    /// The concrete list of evaluation times, in natural units.
    pub fn resolve(&self, omega: f64) -> Vec<f64> {
        let unit = match self.unit {
            TimeUnit::Natural => 1.0,
            TimeUnit::Periods => 2.0 * std::f64::consts::PI / omega,
        };
        match (&self.times, self.t_max, self.steps) {
            (Some(times), _, _) => times.iter().map(|t| t * unit).collect(),
            (None, Some(t_max), Some(steps)) => (0..=steps)
                .map(|k| t_max * unit * k as f64 / steps as f64)
                .collect(),
            _ => unreachable!("validated before resolving"),
        }
    }
}

impl SieveConfig {
    fn validate(&self) -> Result<(), CliError> {
        match &self.eval_time {
            EvalTime::Time(t) => {
                if !t.is_finite() || *t < 0.0 {
                    return Err(CliError::config(format!(
                        "sieve.eval_time must be finite and >= 0 (got {t})"
                    )));
                }
            }
            EvalTime::Keyword(word) => {
                if word != "auto" {
                    return Err(CliError::config(format!(
                        "sieve.eval_time must be a number or \"auto\" (got \"{word}\")"
                    )));
                }
            }
        }
        let g = &self.grid;
        if g.theta_samples < 2 || g.aleph_samples < 2 {
            return Err(CliError::config(
                "sieve.grid needs at least 2 samples per axis",
            ));
        }
        if !(g.aleph_min > 0.0) || !(g.aleph_max > g.aleph_min) || !g.aleph_max.is_finite() {
            return Err(CliError::config(format!(
                "sieve.grid aleph range [{}, {}] must satisfy 0 < min < max",
                g.aleph_min, g.aleph_max
            )));
        }
        Ok(())
    }
}

impl ScanConfig {
    fn validate(&self) -> Result<(), CliError> {
        let mut any = false;
        for (name, range) in self.axes() {
            any = true;
            range.validate(name)?;
        }
        if !any {
            return Err(CliError::config(
                "scan needs at least one of lambda, omega, d_qq, d_pp, d_pq",
            ));
        }
        Ok(())
    }

    /// Present axes in their fixed expansion order.
    pub fn axes(&self) -> Vec<(&'static str, &RangeConfig)> {
        [
            ("lambda", &self.lambda),
            ("omega", &self.omega),
            ("d_qq", &self.d_qq),
            ("d_pp", &self.d_pp),
            ("d_pq", &self.d_pq),
        ]
        .into_iter()
        .filter_map(|(name, range)| range.as_ref().map(|r| (name, r)))
        .collect()
    }
}

impl RangeConfig {
    fn validate(&self, name: &str) -> Result<(), CliError> {
        if !self.min.is_finite() || !self.max.is_finite() || self.min > self.max {
            return Err(CliError::config(format!(
                "scan.{name}: need finite min <= max (got [{}, {}])",
                self.min, self.max
            )));
        }
        if self.steps == 0 {
            return Err(CliError::config(format!("scan.{name}.steps must be >= 1")));
        }
        if self.scale == ScanScale::Log && !(self.min > 0.0) {
            return Err(CliError::config(format!(
                "scan.{name}: log scale needs min > 0 (got {})",
                self.min
            )));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        let n = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|k| {
                let frac = k as f64 / n;
                match self.scale {
                    ScanScale::Linear => self.min + (self.max - self.min) * frac,
                    ScanScale::Log => (self.min.ln() + (self.max.ln() - self.min.ln()) * frac).exp(),
                }
            })
            .collect()
    }
}
