//! Error type shared by every module of the crate.

use thiserror::Error;

/// All failure modes of the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("timestamps must be strictly increasing: {variable} repeats or decreases at t={timestamp}")]
    NonMonotoneTimestamps { variable: String, timestamp: i64 },

    #[error("sample {index} of {variable} is not a finite number")]
    NonFiniteValue { variable: String, index: usize },

    #[error("series too short: need at least {needed} samples, got {got}")]
    SeriesTooShort { needed: usize, got: usize },

    #[error("input must not be empty")]
    EmptyInput,

    #[error("frame count {frames} out of range for series of length {len}")]
    FrameCountOutOfRange { frames: usize, len: usize },

    #[error("shape mismatch: {left} vs {right}")]
    ShapeMismatch { left: usize, right: usize },

    #[error("alphabet size {size} too small, need at least 2")]
    AlphabetTooSmall { size: usize },

    #[error("degenerate data: empirical breakpoints are not strictly increasing")]
    DegenerateData,

    #[error("breakpoint count {got} does not match alphabet size {alphabet} (need {expected})")]
    BreakpointShapeMismatch {
        alphabet: usize,
        expected: usize,
        got: usize,
    },

    #[error("query x={x} outside the knot range [{lo}, {hi}]")]
    OutOfRangeQuery { x: f64, lo: f64, hi: f64 },

    #[error("too few knots: need at least {needed}, got {got}")]
    TooFewKnots { needed: usize, got: usize },

    #[error("duplicate or non-increasing abscissa at x={x}")]
    DuplicateAbscissa { x: f64 },

    #[error("polynomial degree too high: {n} points exceeds the cap of {max}")]
    DegreeTooHigh { n: usize, max: usize },

    #[error("ill-conditioned system: pivot fell below 1e-13 of its row norm")]
    IllConditioned,

    #[error("polynomial has no coefficients")]
    EmptyCoefficients,

    #[error("degenerate variance: sst is zero but sse is not")]
    DegenerateVariance,

    #[error("sample count must be positive")]
    ZeroSamples,

    #[error("invalid counts: raw={raw}, reduced={reduced}")]
    InvalidCounts { raw: usize, reduced: usize },

    #[error("no overlapping timestamps between observed and reconstructed series")]
    NoOverlap,

    #[error("parse error at line {line}: {reason}")]
    ParseError { line: usize, reason: String },

    #[error("duplicate timestamp {timestamp} for variable {variable}")]
    DuplicateTimestamp { variable: String, timestamp: i64 },

    #[error("input file contains no data rows")]
    EmptyFile,

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by user-supplied input (files, flags, config),
    /// as opposed to internal failures. Drives the CLI exit code.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::NonMonotoneTimestamps { .. }
                | Error::NonFiniteValue { .. }
                | Error::SeriesTooShort { .. }
                | Error::EmptyInput
                | Error::EmptyFile
                | Error::ParseError { .. }
                | Error::DuplicateTimestamp { .. }
                | Error::InvalidParameters(_)
                | Error::InvalidConfig(_)
                | Error::TooFewKnots { .. }
                | Error::FrameCountOutOfRange { .. }
                | Error::AlphabetTooSmall { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
