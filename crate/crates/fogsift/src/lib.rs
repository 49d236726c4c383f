//! fogsift: a fog-computing time-series reduction and reconstruction toolkit.
//!
//! A fog node turns raw sensor series into batches (min/max/mean per window),
//! checks each batch against an acceptance band and raises events, and
//! extracts a sparse relevant-point set per 24-hour window (daily extrema,
//! trend changes, PAA frames, or SAX words). The cloud side rebuilds a dense
//! series from the reduced points with a piecewise-linear, cubic-spline or
//! shape-preserving pchip interpolant and scores the reconstruction with
//! SSE / R-square / RMSE plus data-reduction accounting.
//!
//! Everything is deterministic: the same input and configuration produce
//! byte-identical reports.

pub mod config;
pub mod error;
pub mod fog;
pub mod gof;
pub mod ingest;
pub mod interp;
pub mod paa;
pub mod pipeline;
pub mod preprocess;
pub mod report;
pub mod sax;
pub mod synth;
pub mod types;

pub use config::{BreakpointMode, Interpolant, PipelineConfig};
pub use error::{Error, Result};
pub use fog::{aggregate_batches, check_outliers, detect_trend_changes, extract_daily_extrema};
pub use gof::{evaluate, r_square, reduction_stats, rmse, sse, sst};
pub use ingest::ingest_csv;
pub use interp::{
    cubic_spline, interpolate, lagrange_fit, linear_interpolate, pchip, polynomial_eval,
    reconstruct, CubicSpline, Knots, Pchip, PolynomialCoefficients,
};
pub use paa::{euclidean_distance, paa_distance, paa_transform, z_normalize, PaaVector};
pub use pipeline::{
    run_cloud, run_fog_node, run_pipeline, MessageKind, PipelineRun, RunReport, UpstreamMessage,
};
pub use preprocess::preprocess;
pub use report::emit_report;
pub use sax::{inverse_normal_cdf, sax_breakpoints, sax_symbolize, symbol_deviation_event};
pub use synth::{generate_synthetic, generate_synthetic_with, SynthParams, SynthProfile};
pub use types::{
    validate_series, Batch, Event, EventKind, GofReport, MethodMeta, ReducedSeries,
    ReductionMethod, Sample, SaxWord, TimeSeries, Timestamp,
};
