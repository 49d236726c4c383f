//! Ingestion-side cleanup: gap filling, 3-point median despiking, and
//! averaging to the batch cadence. The order is fixed: gaps first, then the
//! median pass, then averaging.

use crate::config::PipelineConfig;
use crate::fog::aggregate_batches;
use crate::types::{Sample, TimeSeries, Timestamp};

/// Most common positive delta between consecutive timestamps (ties go to the
/// smaller delta). None for series with fewer than two samples.
fn native_cadence(samples: &[Sample]) -> Option<Timestamp> {
    if samples.len() < 2 {
        return None;
    }
    let mut counts: std::collections::BTreeMap<Timestamp, usize> = Default::default();
    for w in samples.windows(2) {
        *counts.entry(w[1].timestamp - w[0].timestamp).or_default() += 1;
    }
    counts
        .into_iter()
        .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
        .map(|(delta, _)| delta)
}

/// Fills gaps shorter than three batch windows by linear interpolation at
/// the native cadence; longer gaps stay open.
fn fill_gaps(samples: &[Sample], batch_seconds: i64) -> Vec<Sample> {
    let Some(cadence) = native_cadence(samples) else {
        return samples.to_vec();
    };
    let limit = 3 * batch_seconds;
    let mut out = Vec::with_capacity(samples.len());
    for w in samples.windows(2) {
        out.push(w[0]);
        let gap = w[1].timestamp - w[0].timestamp;
        if gap > cadence && gap < limit {
            let mut t = w[0].timestamp + cadence;
            while t < w[1].timestamp {
                let frac = (t - w[0].timestamp) as f64 / gap as f64;
                out.push(Sample::new(t, w[0].value + frac * (w[1].value - w[0].value)));
                t += cadence;
            }
        }
    }
    out.push(*samples.last().unwrap());
    out
}

/// 3-point running median; the endpoints pass through unchanged.
fn median_filter(samples: &[Sample]) -> Vec<Sample> {
    if samples.len() < 3 {
        return samples.to_vec();
    }
    let mut out = samples.to_vec();
    for i in 1..samples.len() - 1 {
        let (a, b, c) = (
            samples[i - 1].value,
            samples[i].value,
            samples[i + 1].value,
        );
        out[i].value = a.max(b).min(a.max(c)).min(b.max(c));
    }
    out
}

/// Full preprocessing pass; the result has one sample per non-empty batch
/// window, stamped at the window start.
pub fn preprocess(series: &TimeSeries, config: &PipelineConfig) -> TimeSeries {
    if series.is_empty() {
        return series.clone();
    }
    let filled = fill_gaps(&series.samples, config.batch_seconds());
    let smoothed = median_filter(&filled);
    let stage = TimeSeries::new(series.variable.clone(), series.unit.clone(), smoothed);
    let samples = aggregate_batches(&stage, config.batch_minutes)
        .into_iter()
        .map(|b| Sample::new(b.window_start, b.mean))
        .collect();
    TimeSeries::new(series.variable.clone(), series.unit.clone(), samples)
}
