//! Deterministic synthetic sensor data, standing in for field recordings:
//! a diurnal soil-temperature sinusoid and a solar-radiation profile with
//! daylight bumps and cloud dropouts.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::types::{Sample, TimeSeries};

/// First generated timestamp: 2021-06-01T00:00:00Z, midnight-aligned.
pub const SYNTH_START: i64 = 1_622_505_600;

const DAY_SECONDS: i64 = 86_400;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SynthProfile {
    SoilTemperature,
    SolarRadiation,
}

impl std::str::FromStr for SynthProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "soil-temperature" | "soil_temperature" => Ok(SynthProfile::SoilTemperature),
            "solar-radiation" | "solar_radiation" => Ok(SynthProfile::SolarRadiation),
            other => Err(Error::InvalidParameters(format!(
                "unknown profile: {other}"
            ))),
        }
    }
}

/// Knobs of the generator; `Default` matches the profiles used throughout.
#[derive(Debug, Clone, Copy)]
pub struct SynthParams {
    /// Sinusoid midline for soil temperature, degrees C.
    pub offset: f64,
    /// Sinusoid amplitude for soil temperature.
    pub amplitude: f64,
    /// Gaussian noise sigma for soil temperature; 0 disables noise.
    pub noise_sigma: f64,
    /// Peak clear-sky solar radiation, W/m2.
    pub solar_peak: f64,
    /// Per-sample probability of a cloud dropout during daylight.
    pub cloud_dropout_prob: f64,
    /// First timestamp of the series.
    pub start: i64,
}

impl Default for SynthParams {
    fn default() -> Self {
        SynthParams {
            offset: 18.0,
            amplitude: 6.0,
            noise_sigma: 0.15,
            solar_peak: 900.0,
            cloud_dropout_prob: 0.15,
            start: SYNTH_START,
        }
    }
}

/// Deterministic generator: identical seed and parameters give bit-identical
/// series.
pub fn generate_synthetic(
    days: u32,
    cadence_minutes: u32,
    profile: SynthProfile,
    seed: u64,
) -> Result<TimeSeries> {
    generate_synthetic_with(days, cadence_minutes, profile, seed, SynthParams::default())
}

pub fn generate_synthetic_with(
    days: u32,
    cadence_minutes: u32,
    profile: SynthProfile,
    seed: u64,
    params: SynthParams,
) -> Result<TimeSeries> {
    if days < 1 {
        return Err(Error::InvalidParameters("days must be at least 1".into()));
    }
    if cadence_minutes < 1 || i64::from(cadence_minutes) * 60 > DAY_SECONDS {
        return Err(Error::InvalidParameters(
            "cadence must be between 1 minute and 1 day".into(),
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let step = i64::from(cadence_minutes) * 60;
    let span = i64::from(days) * DAY_SECONDS;

    let mut samples = Vec::new();
    let mut offset_secs = 0i64;
    match profile {
        SynthProfile::SoilTemperature => {
            let noise = if params.noise_sigma > 0.0 {
                Some(Normal::new(0.0, params.noise_sigma).expect("valid sigma"))
            } else {
                None
            };
            while offset_secs < span {
                let t = params.start + offset_secs;
                let tod = t.rem_euclid(DAY_SECONDS) as f64;
                // peak at 15:00, the usual soil lag behind air temperature
                let phase = 2.0 * std::f64::consts::PI * (tod - 32_400.0) / DAY_SECONDS as f64;
                let mut v = params.offset + params.amplitude * phase.sin();
                if let Some(n) = &noise {
                    v += n.sample(&mut rng);
                }
                samples.push(Sample::new(t, v));
                offset_secs += step;
            }
            Ok(TimeSeries::new("soil_temperature", "C", samples))
        }
        SynthProfile::SolarRadiation => {
            const SUNRISE: f64 = 21_600.0; // 06:00
            const SUNSET: f64 = 64_800.0; // 18:00
            while offset_secs < span {
                let t = params.start + offset_secs;
                let tod = t.rem_euclid(DAY_SECONDS) as f64;
                let v = if tod > SUNRISE && tod < SUNSET {
                    let arc = std::f64::consts::PI * (tod - SUNRISE) / (SUNSET - SUNRISE);
                    let base = params.solar_peak * arc.sin();
                    let dropout: f64 = rng.random();
                    let factor = if dropout < params.cloud_dropout_prob {
                        0.2 + 0.4 * rng.random::<f64>()
                    } else {
                        1.0
                    };
                    let jitter = 0.97 + 0.06 * rng.random::<f64>();
                    (base * factor * jitter).max(0.0)
                } else {
                    0.0
                };
                samples.push(Sample::new(t, v));
                offset_secs += step;
            }
            Ok(TimeSeries::new("solar_radiation", "W/m2", samples))
        }
    }
}
