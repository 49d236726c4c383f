//! Symbolic Aggregate approXimation: breakpoint tables, symbolization of PAA
//! frames, and the symbol-deviation event primitive.

use crate::error::{Error, Result};
use crate::paa::PaaVector;
use crate::types::{Event, EventKind, SaxWord, Timestamp};
use crate::BreakpointMode;

/// Inverse CDF of the standard normal distribution, by rational
/// approximation (absolute error below 1e-8 over the probed range; see the
/// bisection-on-erf oracle in the tests).
pub fn inverse_normal_cdf(p: f64) -> f64 {
    debug_assert!(p > 0.0 && p < 1.0);

    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.38357751867269e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const P_LOW: f64 = 0.02425;

    let tail = |q: f64| -> f64 {
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };

    if p < P_LOW {
        tail((-2.0 * p.ln()).sqrt())
    } else if p > 1.0 - P_LOW {
        -tail((-2.0 * (1.0 - p).ln()).sqrt())
    } else {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    }
}

/// Breakpoints dividing the value range into `alphabet_size` equiprobable
/// bins: standard-normal quantiles in Gaussian mode (for z-normalized
/// values), empirical quantiles of `data` in Histogram mode (raw values).
pub fn sax_breakpoints(
    alphabet_size: usize,
    mode: BreakpointMode,
    data: Option<&[f64]>,
) -> Result<Vec<f64>> {
    if alphabet_size < 2 {
        return Err(Error::AlphabetTooSmall {
            size: alphabet_size,
        });
    }
    let probs: Vec<f64> = (1..alphabet_size)
        .map(|k| k as f64 / alphabet_size as f64)
        .collect();

    let breakpoints: Vec<f64> = match mode {
        BreakpointMode::GaussianEquiprobable => {
            probs.iter().map(|&p| inverse_normal_cdf(p)).collect()
        }
        BreakpointMode::Histogram => {
            let data = data.filter(|d| !d.is_empty()).ok_or(Error::EmptyInput)?;
            let mut sorted = data.to_vec();
            sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
            probs.iter().map(|&p| quantile(&sorted, p)).collect()
        }
    };

    let strictly_increasing = breakpoints.windows(2).all(|w| w[0] < w[1]);
    if !strictly_increasing {
        return Err(Error::DegenerateData);
    }
    Ok(breakpoints)
}

/// Linear-interpolation quantile of sorted data (median of [1,2,3,4] is 2.5).
fn quantile(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Maps each PAA frame mean to its alphabet index: values exactly on a
/// breakpoint take the lower symbol.
pub fn sax_symbolize(
    paa: &PaaVector,
    breakpoints: &[f64],
    alphabet_size: usize,
) -> Result<SaxWord> {
    if breakpoints.len() + 1 != alphabet_size {
        return Err(Error::BreakpointShapeMismatch {
            alphabet: alphabet_size,
            expected: alphabet_size.saturating_sub(1),
            got: breakpoints.len(),
        });
    }
    if !breakpoints.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::DegenerateData);
    }
    let symbols = paa
        .values
        .iter()
        .map(|&v| breakpoints.partition_point(|&b| b < v))
        .collect();
    Ok(SaxWord {
        symbols,
        alphabet_size,
        frame_count: paa.frame_count,
        breakpoints: breakpoints.to_vec(),
    })
}

/// Compares two SAX words of identical shape. Returns a `SymbolDeviation`
/// event for the first differing frame (1-based position in `observed`;
/// the band fields carry the expected and observed symbol indices), or
/// `None` when the words are identical.
pub fn symbol_deviation_event(
    expected: &SaxWord,
    observed: &SaxWord,
    at: Timestamp,
    variable: &str,
) -> Result<Option<Event>> {
    if expected.frame_count != observed.frame_count {
        return Err(Error::ShapeMismatch {
            left: expected.frame_count,
            right: observed.frame_count,
        });
    }
    if expected.alphabet_size != observed.alphabet_size {
        return Err(Error::ShapeMismatch {
            left: expected.alphabet_size,
            right: observed.alphabet_size,
        });
    }
    if expected.breakpoints != observed.breakpoints {
        return Err(Error::ShapeMismatch {
            left: expected.breakpoints.len(),
            right: observed.breakpoints.len(),
        });
    }

    for (i, (e, o)) in expected.symbols.iter().zip(&observed.symbols).enumerate() {
        if e != o {
            return Ok(Some(Event {
                variable: variable.to_string(),
                timestamp: at,
                observed: (i + 1) as f64,
                band_low: *e as f64,
                band_high: *o as f64,
                kind: EventKind::SymbolDeviation,
            }));
        }
    }
    Ok(None)
}
