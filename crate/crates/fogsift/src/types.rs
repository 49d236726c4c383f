//! Shared domain types.
//!
//! All timestamps are integer seconds since the UNIX epoch, UTC. Units are
//! inert string tags; no unit arithmetic happens anywhere. Every type here is
//! an immutable value after construction and is safe to share across threads.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Seconds since the UNIX epoch, UTC.
pub type Timestamp = i64;

/// One timestamped measurement of a physical variable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub timestamp: Timestamp,
    pub value: f64,
}

impl Sample {
    pub fn new(timestamp: Timestamp, value: f64) -> Self {
        Sample { timestamp, value }
    }
}

/// An ordered series of samples for a single variable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    pub variable: String,
    pub unit: String,
    pub samples: Vec<Sample>,
}

impl TimeSeries {
    pub fn new(
        variable: impl Into<String>,
        unit: impl Into<String>,
        samples: Vec<Sample>,
    ) -> Self {
        TimeSeries {
            variable: variable.into(),
            unit: unit.into(),
            samples,
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn values(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.value).collect()
    }

    pub fn timestamps(&self) -> Vec<Timestamp> {
        self.samples.iter().map(|s| s.timestamp).collect()
    }
}

/// Checks the series invariants: strictly increasing timestamps and finite
/// values. Returns the series unchanged when they hold.
pub fn validate_series(series: TimeSeries) -> Result<TimeSeries> {
    for (i, sample) in series.samples.iter().enumerate() {
        if !sample.value.is_finite() {
            return Err(Error::NonFiniteValue {
                variable: series.variable.clone(),
                index: i,
            });
        }
        if i > 0 && sample.timestamp <= series.samples[i - 1].timestamp {
            return Err(Error::NonMonotoneTimestamps {
                variable: series.variable.clone(),
                timestamp: sample.timestamp,
            });
        }
    }
    Ok(series)
}

/// Aggregated statistics over one fixed-duration window (step A output).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Batch {
    pub window_start: Timestamp,
    pub window_end: Timestamp,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    pub count: usize,
}

/// What triggered an event.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    /// A batch min or max fell outside the acceptance band.
    BandViolation,
    /// A SAX word differs from the expected word.
    SymbolDeviation,
}

impl EventKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            EventKind::BandViolation => "band_violation",
            EventKind::SymbolDeviation => "symbol_deviation",
        }
    }
}

/// A detection record sent upstream immediately.
///
/// For `BandViolation`, `observed` is the offending batch statistic and the
/// band fields carry the acceptance thresholds. For `SymbolDeviation`,
/// `observed` carries the first differing frame index and the band fields
/// carry the expected and observed symbol indices at that frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Event {
    pub variable: String,
    pub timestamp: Timestamp,
    pub observed: f64,
    pub band_low: f64,
    pub band_high: f64,
    pub kind: EventKind,
}

/// Relevant-data extraction method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionMethod {
    DailyExtrema,
    TrendChange,
    Paa,
    Sax,
}

impl ReductionMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            ReductionMethod::DailyExtrema => "daily_extrema",
            ReductionMethod::TrendChange => "trend_change",
            ReductionMethod::Paa => "paa",
            ReductionMethod::Sax => "sax",
        }
    }
}

impl std::str::FromStr for ReductionMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "daily-extrema" | "daily_extrema" => Ok(ReductionMethod::DailyExtrema),
            "trend-change" | "trend_change" => Ok(ReductionMethod::TrendChange),
            "paa" => Ok(ReductionMethod::Paa),
            "sax" => Ok(ReductionMethod::Sax),
            other => Err(Error::InvalidConfig(format!(
                "unknown extraction method: {other}"
            ))),
        }
    }
}

/// Parameters the reduced set was produced with.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct MethodMeta {
    /// Trend dead-band half-width.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trend_delta: Option<f64>,
    /// Number of PAA frames per window.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frames: Option<usize>,
    /// SAX alphabet size.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alphabet_size: Option<usize>,
    /// Extraction window length in seconds.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window_seconds: Option<i64>,
}

/// The sparse set of relevant points a fog node transmits upstream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReducedSeries {
    pub variable: String,
    pub method: ReductionMethod,
    pub points: Vec<Sample>,
    pub meta: MethodMeta,
}

impl ReducedSeries {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// A symbolized window: one alphabet index per PAA frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SaxWord {
    pub symbols: Vec<usize>,
    pub alphabet_size: usize,
    pub frame_count: usize,
    pub breakpoints: Vec<f64>,
}

impl SaxWord {
    /// Renders the word with letters 'a', 'b', ... for alphabets up to 26.
    pub fn to_letters(&self) -> String {
        self.symbols
            .iter()
            .map(|&s| (b'a' + (s.min(25) as u8)) as char)
            .collect()
    }
}

/// Goodness-of-fit and data-reduction metrics for one variable/method pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GofReport {
    pub variable: String,
    pub method: String,
    pub sse: f64,
    pub sst: f64,
    pub r_square: f64,
    pub rmse: f64,
    pub raw_count: usize,
    pub reduced_count: usize,
    pub reduction_ratio: f64,
}
