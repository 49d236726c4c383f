//! Piecewise Aggregate Approximation: frame-mean dimensionality reduction
//! from n samples to M frame means, plus the PAA-space distance that lower
//! bounds the Euclidean distance.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A series approximated by M frame means.
///
/// When M does not divide n, the final frame absorbs the remainder and its
/// mean is taken over its true, larger count; `source_length` records the
/// real n and the distance uses n/M with real division.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PaaVector {
    pub values: Vec<f64>,
    pub source_length: usize,
    pub frame_count: usize,
}

/// Rescales to sample mean 0 and population standard deviation 1. Inputs with
/// standard deviation below 1e-12 map to all zeros.
pub fn z_normalize(values: &[f64]) -> Result<Vec<f64>> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    let sd = var.sqrt();
    if sd < 1e-12 {
        return Ok(vec![0.0; values.len()]);
    }
    Ok(values.iter().map(|v| (v - mean) / sd).collect())
}

/// Splits the input into M frames and returns the mean of each. Single pass
/// with running frame sums.
pub fn paa_transform(values: &[f64], frames: usize) -> Result<PaaVector> {
    let n = values.len();
    if frames < 1 || frames > n {
        return Err(Error::FrameCountOutOfRange { frames, len: n });
    }
    let base = n / frames;
    let mut out = Vec::with_capacity(frames);
    for i in 0..frames {
        let start = i * base;
        let end = if i == frames - 1 { n } else { start + base };
        let sum: f64 = values[start..end].iter().sum();
        out.push(sum / (end - start) as f64);
    }
    Ok(PaaVector {
        values: out,
        source_length: n,
        frame_count: frames,
    })
}

/// PAA-space distance: sqrt(n/M) * sqrt(sum of squared frame differences).
pub fn paa_distance(x: &PaaVector, y: &PaaVector) -> Result<f64> {
    if x.frame_count != y.frame_count {
        return Err(Error::ShapeMismatch {
            left: x.frame_count,
            right: y.frame_count,
        });
    }
    if x.source_length != y.source_length {
        return Err(Error::ShapeMismatch {
            left: x.source_length,
            right: y.source_length,
        });
    }
    let sq: f64 = x
        .values
        .iter()
        .zip(&y.values)
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    let scale = x.source_length as f64 / x.frame_count as f64;
    Ok(scale.sqrt() * sq.sqrt())
}

/// Plain Euclidean distance between equal-length series.
pub fn euclidean_distance(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::ShapeMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    Ok(x.iter()
        .zip(y)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt())
}
