//! Analysis configuration: TOML file, command-line flags and defaults.
//!
//! Precedence is flags, then file, then defaults.

use serde::Deserialize;
use std::path::Path;

use singlemode::corrections::Thresholds;

use crate::CliError;

pub const DEFAULT_INTENSITY: f64 = 1e22;
pub const DEFAULT_WAVELENGTH: f64 = 800.0;
pub const DEFAULT_DURATION: f64 = 30.0;
pub const DEFAULT_SPOT: f64 = 1e-8;
pub const DEFAULT_V_PERP: f64 = 0.127;
pub const DEFAULT_V_Z: f64 = 0.99;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Linear,
    Log,
}

/// Parameters a sweep axis may vary.
pub const SWEEP_PARAMETERS: [&str; 7] = ["intensity", "wavelength", "duration", "spot", "v_perp", "v_z", "gamma"];

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    pub parameter: String,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
    #[serde(default = "default_scale")]
    pub scale: Scale,
}

fn default_scale() -> Scale {
    Scale::Linear
}

impl SweepAxis {
    /// Parses `name:min:max:steps[:linear|log]`.
    pub fn parse(spec: &str) -> Result<Self, String> {
        let parts: Vec<&str> = spec.split(':').collect();
        if !(parts.len() == 4 || parts.len() == 5) {
            return Err(format!("sweep axis '{spec}': expected name:min:max:steps[:linear|log]"));
        }
        let num = |field: &str, s: &str| s.trim().parse::<f64>().map_err(|_| format!("sweep axis {field}: cannot parse '{s}'"));
        let steps = parts[3]
            .trim()
            .parse::<usize>()
            .map_err(|_| format!("sweep axis steps: cannot parse '{}'", parts[3]))?;
        let scale = match parts.get(4).map(|s| s.trim()) {
            None | Some("linear") | Some("lin") => Scale::Linear,
            Some("log") => Scale::Log,
            Some(other) => return Err(format!("sweep axis scale: expected linear or log, got '{other}'")),
        };
        Ok(Self {
            parameter: parts[0].trim().to_string(),
            min: num("min", parts[1])?,
            max: num("max", parts[2])?,
            steps,
            scale,
        })
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !SWEEP_PARAMETERS.contains(&self.parameter.as_str()) {
            return Err(CliError::config(
                "sweep.parameter",
                format!("unknown parameter '{}' (expected one of {})", self.parameter, SWEEP_PARAMETERS.join(", ")),
            ));
        }
        if self.steps == 0 {
            return Err(CliError::config("sweep.steps", "must be >= 1"));
        }
        if !(self.min.is_finite() && self.max.is_finite()) {
            return Err(CliError::config("sweep.min/max", "must be finite"));
        }
        if self.scale == Scale::Log && !(self.min > 0.0 && self.max > 0.0) {
            return Err(CliError::config("sweep.min/max", "log scale needs positive bounds"));
        }
        Ok(())
    }

    /// Axis values in order.
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                let t = i as f64 / last;
                match self.scale {
                    Scale::Linear => self.min + (self.max - self.min) * t,
                    Scale::Log => (self.min.ln() + (self.max.ln() - self.min.ln()) * t).exp(),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseSection {
    pub intensity: Option<f64>,
    pub wavelength: Option<f64>,
    pub duration: Option<f64>,
    pub spot: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElectronSection {
    pub v_perp: Option<f64>,
    pub v_z: Option<f64>,
    pub gamma: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThresholdSection {
    pub shift: Option<f64>,
    pub width: Option<f64>,
    pub mu: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub format: Option<OutputFormat>,
}

/// Every setting optional; one layer of the precedence stack.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigLayer {
    #[serde(default)]
    pub pulse: PulseSection,
    #[serde(default)]
    pub electron: ElectronSection,
    #[serde(default)]
    pub thresholds: ThresholdSection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub sweep: Vec<SweepAxis>,
}

impl ConfigLayer {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config { field: "config".into(), message: e.message().to_string() })
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config { field: "config".into(), message: format!("{}: {e}", path.display()) })?;
        Self::from_toml(&text)
    }
}

/// How the electron is specified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ElectronInput {
    Velocity { v_perp: f64, v_z: f64 },
    Gamma(f64),
}

/// Fully resolved configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisConfig {
    pub intensity: f64,
    pub wavelength: f64,
    pub duration: f64,
    pub spot: f64,
    pub electron: ElectronInput,
    pub thresholds: Thresholds,
    pub format: OutputFormat,
    pub sweep: Vec<SweepAxis>,
}

fn electron_of(layer: &ElectronSection, level: &str) -> Result<Option<ElectronInput>, CliError> {
    match (layer.v_perp, layer.v_z, layer.gamma) {
        (None, None, None) => Ok(None),
        (Some(v_perp), Some(v_z), None) => Ok(Some(ElectronInput::Velocity { v_perp, v_z })),
        (None, None, Some(g)) => Ok(Some(ElectronInput::Gamma(g))),
        (_, _, Some(_)) => Err(CliError::config(
            "electron",
            format!("{level}: give either v_perp and v_z, or gamma, not both"),
        )),
        _ => Err(CliError::config("electron", format!("{level}: v_perp and v_z must be given together"))),
    }
}

impl AnalysisConfig {
    /// Resolves `flags` over `file` over defaults.
    pub fn resolve(flags: &ConfigLayer, file: &ConfigLayer) -> Result<Self, CliError> {
        let electron = match electron_of(&flags.electron, "flags")? {
            Some(e) => e,
            None => electron_of(&file.electron, "config file")?
                .unwrap_or(ElectronInput::Velocity { v_perp: DEFAULT_V_PERP, v_z: DEFAULT_V_Z }),
        };
        let pick = |a: Option<f64>, b: Option<f64>, d: f64| a.or(b).unwrap_or(d);
        let defaults = Thresholds::default();
        let sweep = if flags.sweep.is_empty() { file.sweep.clone() } else { flags.sweep.clone() };
        let cfg = Self {
            intensity: pick(flags.pulse.intensity, file.pulse.intensity, DEFAULT_INTENSITY),
            wavelength: pick(flags.pulse.wavelength, file.pulse.wavelength, DEFAULT_WAVELENGTH),
            duration: pick(flags.pulse.duration, file.pulse.duration, DEFAULT_DURATION),
            spot: pick(flags.pulse.spot, file.pulse.spot, DEFAULT_SPOT),
            electron,
            thresholds: Thresholds {
                shift: pick(flags.thresholds.shift, file.thresholds.shift, defaults.shift),
                width: pick(flags.thresholds.width, file.thresholds.width, defaults.width),
                mu: pick(flags.thresholds.mu, file.thresholds.mu, defaults.mu),
            },
            format: flags.output.format.or(file.output.format).unwrap_or(OutputFormat::Text),
            sweep,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        for (field, v) in [
            ("intensity", self.intensity),
            ("wavelength", self.wavelength),
            ("duration", self.duration),
            ("spot", self.spot),
            ("thresholds.shift", self.thresholds.shift),
            ("thresholds.width", self.thresholds.width),
            ("thresholds.mu", self.thresholds.mu),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(CliError::config(field, format!("must be finite and > 0, got {v}")));
            }
        }
        if self.sweep.len() > 2 {
            return Err(CliError::config("sweep", format!("at most 2 axes, got {}", self.sweep.len())));
        }
        for axis in &self.sweep {
            axis.validate()?;
            let velocity_axis = matches!(axis.parameter.as_str(), "v_perp" | "v_z");
            match self.electron {
                ElectronInput::Gamma(_) if velocity_axis => {
                    return Err(CliError::config("sweep.parameter", format!("'{}' needs v_perp/v_z input", axis.parameter)))
                }
                ElectronInput::Velocity { .. } if axis.parameter == "gamma" => {
                    return Err(CliError::config("sweep.parameter", "'gamma' needs gamma input"))
                }
                _ => {}
            }
        }
        if self.sweep.len() == 2 && self.sweep[0].parameter == self.sweep[1].parameter {
            return Err(CliError::config("sweep", "the two axes must differ"));
        }
        Ok(())
    }

    /// Copy with one named parameter replaced.
    pub fn with_parameter(&self, name: &str, value: f64) -> Self {
        let mut c = self.clone();
        match name {
            "intensity" => c.intensity = value,
            "wavelength" => c.wavelength = value,
            "duration" => c.duration = value,
            "spot" => c.spot = value,
            "gamma" => c.electron = ElectronInput::Gamma(value),
            "v_perp" | "v_z" => {
                if let ElectronInput::Velocity { v_perp, v_z } = c.electron {
                    c.electron = if name == "v_perp" {
                        ElectronInput::Velocity { v_perp: value, v_z }
                    } else {
                        ElectronInput::Velocity { v_perp, v_z: value }
                    };
                }
            }
            _ => {}
        }
        c
    }
}
