//! Goodness-of-fit statistics and data-reduction accounting.

use crate::error::{Error, Result};
use crate::types::{GofReport, TimeSeries};

/// Sum of squared errors, optionally weighted. Weights default to all ones.
pub fn sse(observed: &[f64], fitted: &[f64], weights: Option<&[f64]>) -> Result<f64> {
    if observed.is_empty() {
        return Err(Error::EmptyInput);
    }
    if observed.len() != fitted.len() {
        return Err(Error::ShapeMismatch {
            left: observed.len(),
            right: fitted.len(),
        });
    }
    if let Some(w) = weights {
        if w.len() != observed.len() {
            return Err(Error::ShapeMismatch {
                left: observed.len(),
                right: w.len(),
            });
        }
    }
    Ok(observed
        .iter()
        .zip(fitted)
        .enumerate()
        .map(|(i, (x, p))| {
            let w = weights.map_or(1.0, |w| w[i]);
            w * (x - p) * (x - p)
        })
        .sum())
}

/// Total sum of squares around the (weighted) mean.
pub fn sst(observed: &[f64], weights: Option<&[f64]>) -> Result<f64> {
    if observed.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(w) = weights {
        if w.len() != observed.len() {
            return Err(Error::ShapeMismatch {
                left: observed.len(),
                right: w.len(),
            });
        }
    }
    let (wsum, vsum) = observed.iter().enumerate().fold((0.0, 0.0), |(ws, vs), (i, x)| {
        let w = weights.map_or(1.0, |w| w[i]);
        (ws + w, vs + w * x)
    });
    let mean = vsum / wsum;
    Ok(observed
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let w = weights.map_or(1.0, |w| w[i]);
            w * (x - mean) * (x - mean)
        })
        .sum())
}

/// 1 - sse/sst. A zero sst is only meaningful for a perfect fit.
pub fn r_square(sse: f64, sst: f64) -> Result<f64> {
    if sst == 0.0 {
        return if sse == 0.0 {
            Ok(1.0)
        } else {
            Err(Error::DegenerateVariance)
        };
    }
    Ok(1.0 - sse / sst)
}

/// sqrt(sse/n) with the population count n.
pub fn rmse(sse: f64, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::ZeroSamples);
    }
    Ok((sse / n as f64).sqrt())
}

/// Reduction ratio plus the labeled count pair for the report emitter.
pub fn reduction_stats(raw_count: usize, reduced_count: usize) -> Result<(f64, (usize, usize))> {
    if raw_count == 0 || reduced_count == 0 || reduced_count > raw_count {
        return Err(Error::InvalidCounts {
            raw: raw_count,
            reduced: reduced_count,
        });
    }
    Ok((
        raw_count as f64 / reduced_count as f64,
        (raw_count, reduced_count),
    ))
}

/// Scores a reconstruction against the raw series at their common
/// timestamps and assembles the full report.
pub fn evaluate(
    raw: &TimeSeries,
    reconstructed: &TimeSeries,
    reduced_count: usize,
    method: &str,
) -> Result<GofReport> {
    let mut observed = Vec::new();
    let mut fitted = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < raw.samples.len() && j < reconstructed.samples.len() {
        let (a, b) = (&raw.samples[i], &reconstructed.samples[j]);
        match a.timestamp.cmp(&b.timestamp) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                observed.push(a.value);
                fitted.push(b.value);
                i += 1;
                j += 1;
            }
        }
    }
    if observed.is_empty() {
        return Err(Error::NoOverlap);
    }

    let sse_v = sse(&observed, &fitted, None)?;
    let sst_v = sst(&observed, None)?;
    let r2 = r_square(sse_v, sst_v)?;
    let rmse_v = rmse(sse_v, observed.len())?;
    let (ratio, _) = reduction_stats(raw.samples.len(), reduced_count)?;

    Ok(GofReport {
        variable: raw.variable.clone(),
        method: method.to_string(),
        sse: sse_v,
        sst: sst_v,
        r_square: r2,
        rmse: rmse_v,
        raw_count: raw.samples.len(),
        reduced_count,
        reduction_ratio: ratio,
    })
}
