//! Pipeline configuration: defaults, validation, and the flat key=value
//! config-file format used by the CLI.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::ReductionMethod;

/// How SAX symbol ranges are derived.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BreakpointMode {
    /// Standard-normal quantiles, applied to z-normalized values.
    GaussianEquiprobable,
    /// Empirical quantiles of the data, applied to raw values.
    Histogram,
}

impl FromStr for BreakpointMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" | "gaussian-equiprobable" | "gaussian_equiprobable" => {
                Ok(BreakpointMode::GaussianEquiprobable)
            }
            "histogram" => Ok(BreakpointMode::Histogram),
            other => Err(Error::InvalidConfig(format!(
                "unknown breakpoint mode: {other}"
            ))),
        }
    }
}

/// Cloud-side reconstruction method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Interpolant {
    Linear,
    Spline,
    Pchip,
}

impl Interpolant {
    pub fn as_str(&self) -> &'static str {
        match self {
            Interpolant::Linear => "linear",
            Interpolant::Spline => "spline",
            Interpolant::Pchip => "pchip",
        }
    }
}

impl FromStr for Interpolant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" => Ok(Interpolant::Linear),
            "spline" => Ok(Interpolant::Spline),
            "pchip" => Ok(Interpolant::Pchip),
            other => Err(Error::InvalidConfig(format!("unknown interpolant: {other}"))),
        }
    }
}

/// Every tunable of the pipeline. Defaults follow the 30-minute batching the
/// experiments use; everything else is overridable per run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    /// Batch window length, minutes.
    pub batch_minutes: u32,
    /// Acceptance bandwidth weight w in [0, 1).
    pub outlier_weight: f64,
    /// Trend dead-band half-width.
    pub trend_delta: f64,
    /// Relevant-data extraction method (step C).
    pub extraction_method: ReductionMethod,
    /// PAA frames per 24-hour window.
    pub paa_frames: usize,
    /// SAX alphabet size (>= 2).
    pub sax_alphabet: usize,
    /// SAX breakpoint derivation mode.
    pub breakpoint_mode: BreakpointMode,
    /// Cloud-side interpolant.
    pub interpolant: Interpolant,
    /// Start of the 24-hour extraction window, seconds after midnight UTC.
    pub day_boundary: u32,
    /// Wire-size constant used to turn point counts into a bytes estimate.
    pub bytes_per_point: u32,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            batch_minutes: 30,
            outlier_weight: 0.1,
            trend_delta: 0.0,
            extraction_method: ReductionMethod::TrendChange,
            paa_frames: 8,
            sax_alphabet: 4,
            breakpoint_mode: BreakpointMode::GaussianEquiprobable,
            interpolant: Interpolant::Pchip,
            day_boundary: 0,
            bytes_per_point: 12,
        }
    }
}

impl PipelineConfig {
    pub fn batch_seconds(&self) -> i64 {
        i64::from(self.batch_minutes) * 60
    }

    /// Checks the stated ranges of every field.
    pub fn validate(&self) -> Result<()> {
        if self.batch_minutes == 0 {
            return Err(Error::InvalidConfig("batch_minutes must be positive".into()));
        }
        if !(0.0..1.0).contains(&self.outlier_weight) {
            return Err(Error::InvalidConfig(
                "outlier_weight must lie in [0, 1)".into(),
            ));
        }
        if !self.trend_delta.is_finite() || self.trend_delta < 0.0 {
            return Err(Error::InvalidConfig(
                "trend_delta must be finite and non-negative".into(),
            ));
        }
        if self.paa_frames == 0 {
            return Err(Error::InvalidConfig("paa_frames must be positive".into()));
        }
        if self.sax_alphabet < 2 {
            return Err(Error::InvalidConfig("sax_alphabet must be at least 2".into()));
        }
        if self.day_boundary >= 86_400 {
            return Err(Error::InvalidConfig(
                "day_boundary must be a time of day below 24:00:00".into(),
            ));
        }
        if self.bytes_per_point == 0 {
            return Err(Error::InvalidConfig(
                "bytes_per_point must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Parses the flat `key=value` config file format. Blank lines and lines
    /// starting with `#` are ignored. Unknown keys are errors.
    pub fn parse_file_contents(&mut self, contents: &str) -> Result<()> {
        for (lineno, raw) in contents.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::InvalidConfig(format!("line {}: expected key=value", lineno + 1))
            })?;
            self.set(key.trim(), value.trim())?;
        }
        Ok(())
    }

    /// Sets one field from its textual form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |what: &str| Error::InvalidConfig(format!("bad value for {what}: {value}"));
        match key {
            "batch_minutes" => {
                self.batch_minutes = value.parse().map_err(|_| bad("batch_minutes"))?
            }
            "outlier_weight" => {
                self.outlier_weight = value.parse().map_err(|_| bad("outlier_weight"))?
            }
            "trend_delta" => self.trend_delta = value.parse().map_err(|_| bad("trend_delta"))?,
            "extraction_method" => self.extraction_method = value.parse()?,
            "paa_frames" => self.paa_frames = value.parse().map_err(|_| bad("paa_frames"))?,
            "sax_alphabet" => {
                self.sax_alphabet = value.parse().map_err(|_| bad("sax_alphabet"))?
            }
            "breakpoint_mode" => self.breakpoint_mode = value.parse()?,
            "interpolant" => self.interpolant = value.parse()?,
            "day_boundary" => self.day_boundary = parse_day_boundary(value)?,
            "bytes_per_point" => {
                self.bytes_per_point = value.parse().map_err(|_| bad("bytes_per_point"))?
            }
            other => {
                return Err(Error::InvalidConfig(format!("unknown config key: {other}")));
            }
        }
        Ok(())
    }
}

/// Accepts `HH:MM:SS` or plain seconds after midnight.
pub fn parse_day_boundary(value: &str) -> Result<u32> {
    let invalid = || Error::InvalidConfig(format!("bad day_boundary: {value}"));
    if let Ok(secs) = value.parse::<u32>() {
        return if secs < 86_400 { Ok(secs) } else { Err(invalid()) };
    }
    let parts: Vec<&str> = value.split(':').collect();
    if parts.len() != 3 {
        return Err(invalid());
    }
    let h: u32 = parts[0].parse().map_err(|_| invalid())?;
    let m: u32 = parts[1].parse().map_err(|_| invalid())?;
    let s: u32 = parts[2].parse().map_err(|_| invalid())?;
    if h >= 24 || m >= 60 || s >= 60 {
        return Err(invalid());
    }
    Ok(h * 3600 + m * 60 + s)
}
