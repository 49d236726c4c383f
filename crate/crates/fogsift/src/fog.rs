//! Fog-node reduction primitives: batching (step A), the outlier band check
//! (step B), and relevant-data extraction (step C, daily extrema and
//! trend-change detection).

use crate::error::{Error, Result};
use crate::types::{
    Batch, Event, EventKind, MethodMeta, ReducedSeries, ReductionMethod, Sample, TimeSeries,
    Timestamp,
};

const DAY_SECONDS: i64 = 86_400;

/// Groups samples into fixed windows aligned to epoch multiples of
/// `batch_minutes` and computes min/max/mean/count per non-empty window.
pub fn aggregate_batches(series: &TimeSeries, batch_minutes: u32) -> Vec<Batch> {
    assert!(batch_minutes > 0, "batch_minutes must be positive");
    let width = i64::from(batch_minutes) * 60;

    let mut batches = Vec::new();
    let mut current: Option<(i64, Batch)> = None;

    for sample in &series.samples {
        let idx = sample.timestamp.div_euclid(width);
        match current.as_mut() {
            Some((cur_idx, batch)) if *cur_idx == idx => {
                batch.min = batch.min.min(sample.value);
                batch.max = batch.max.max(sample.value);
                batch.mean += sample.value; // running sum until the window closes
                batch.count += 1;
            }
            _ => {
                if let Some((_, mut done)) = current.take() {
                    done.mean /= done.count as f64;
                    batches.push(done);
                }
                current = Some((
                    idx,
                    Batch {
                        window_start: idx * width,
                        window_end: (idx + 1) * width,
                        min: sample.value,
                        max: sample.value,
                        mean: sample.value,
                        count: 1,
                    },
                ));
            }
        }
    }
    if let Some((_, mut done)) = current.take() {
        done.mean /= done.count as f64;
        batches.push(done);
    }
    batches
}

/// Step B: acceptance band around the batch mean. Emits a `BandViolation`
/// event for the batch min if it falls below the band and for the batch max
/// if it rises above it.
///
/// The thresholds are `mean*(1-w)` and `mean*(1+w)`; for negative means they
/// invert, so the band is normalized to `[min(t0,t1), max(t0,t1)]`.
pub fn check_outliers(batch: &Batch, variable: &str, weight: f64) -> Vec<Event> {
    let t0 = batch.mean * (1.0 - weight);
    let t1 = batch.mean * (1.0 + weight);
    let band_low = t0.min(t1);
    let band_high = t0.max(t1);

    let mut events = Vec::new();
    let mut push = |observed: f64| {
        events.push(Event {
            variable: variable.to_string(),
            timestamp: batch.window_start,
            observed,
            band_low,
            band_high,
            kind: EventKind::BandViolation,
        });
    };
    if batch.min < band_low {
        push(batch.min);
    }
    if batch.max > band_high {
        push(batch.max);
    }
    events
}

/// Index of the 24-hour window containing `ts`, relative to `day_boundary`
/// (seconds after midnight UTC).
pub fn day_index(ts: Timestamp, day_boundary: u32) -> i64 {
    (ts - i64::from(day_boundary)).div_euclid(DAY_SECONDS)
}

/// Start timestamp of 24-hour window `idx`.
pub fn day_window_start(idx: i64, day_boundary: u32) -> Timestamp {
    idx * DAY_SECONDS + i64::from(day_boundary)
}

/// Step C, regular-shape variant: for each 24-hour window emits the
/// minimum-of-mins and maximum-of-maxes, each stamped with the window_start
/// of the batch where the extremum occurs. Ties go to the earliest batch.
/// On a constant day both points coincide; they are still both emitted.
pub fn extract_daily_extrema(
    batches: &[Batch],
    variable: &str,
    day_boundary: u32,
) -> ReducedSeries {
    let mut points = Vec::new();

    let mut i = 0;
    while i < batches.len() {
        let day = day_index(batches[i].window_start, day_boundary);
        let mut j = i;
        let (mut min_at, mut min_val) = (batches[i].window_start, batches[i].min);
        let (mut max_at, mut max_val) = (batches[i].window_start, batches[i].max);
        while j < batches.len() && day_index(batches[j].window_start, day_boundary) == day {
            if batches[j].min < min_val {
                min_val = batches[j].min;
                min_at = batches[j].window_start;
            }
            if batches[j].max > max_val {
                max_val = batches[j].max;
                max_at = batches[j].window_start;
            }
            j += 1;
        }
        let mut pair = [Sample::new(min_at, min_val), Sample::new(max_at, max_val)];
        pair.sort_by_key(|s| s.timestamp);
        points.extend_from_slice(&pair);
        i = j;
    }

    points.sort_by_key(|s| s.timestamp);
    ReducedSeries {
        variable: variable.to_string(),
        method: ReductionMethod::DailyExtrema,
        points,
        meta: MethodMeta {
            window_seconds: Some(DAY_SECONDS),
            ..MethodMeta::default()
        },
    }
}

/// Step C, irregular-shape variant. Per-step trends are the dead-banded signs
/// of consecutive differences: +1 if d > delta, -1 if d < -delta, 0 otherwise.
/// Wherever the trend flips, the vertex point is retained. The first and last
/// points are always retained.
pub fn detect_trend_changes(series: &TimeSeries, delta: f64) -> Result<ReducedSeries> {
    let n = series.len();
    if n < 2 {
        return Err(Error::SeriesTooShort { needed: 2, got: n });
    }

    let trends: Vec<i8> = series
        .samples
        .windows(2)
        .map(|w| trend_sign(w[1].value - w[0].value, delta))
        .collect();

    let mut keep = vec![false; n];
    keep[0] = true;
    keep[n - 1] = true;
    for i in 0..trends.len().saturating_sub(1) {
        if trends[i] != trends[i + 1] {
            keep[i + 1] = true;
        }
    }

    let points = series
        .samples
        .iter()
        .zip(&keep)
        .filter(|(_, &k)| k)
        .map(|(s, _)| *s)
        .collect();

    Ok(ReducedSeries {
        variable: series.variable.clone(),
        method: ReductionMethod::TrendChange,
        points,
        meta: MethodMeta {
            trend_delta: Some(delta),
            ..MethodMeta::default()
        },
    })
}

fn trend_sign(d: f64, delta: f64) -> i8 {
    if d > delta {
        1
    } else if d < -delta {
        -1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn series(pairs: &[(i64, f64)]) -> TimeSeries {
        TimeSeries::new(
            "v",
            "",
            pairs.iter().map(|&(t, v)| Sample::new(t, v)).collect(),
        )
    }

    #[test]
    fn batch_of_three_samples() {
        let s = series(&[(0, 4.0), (600, 6.0), (1200, 5.0)]);
        let batches = aggregate_batches(&s, 30);
        assert_eq!(batches.len(), 1);
        let b = batches[0];
        assert_eq!(b.window_start, 0);
        assert_eq!(b.window_end, 1800);
        assert_eq!(b.min, 4.0);
        assert_eq!(b.max, 6.0);
        assert_eq!(b.mean, 5.0);
        assert_eq!(b.count, 3);
    }

    #[test]
    fn single_sample_batch() {
        let batches = aggregate_batches(&series(&[(100, 7.0)]), 30);
        assert_eq!(batches.len(), 1);
        let b = batches[0];
        assert_eq!((b.min, b.max, b.mean, b.count), (7.0, 7.0, 7.0, 1));
    }

    #[test]
    fn empty_series_yields_no_batches() {
        assert!(aggregate_batches(&series(&[]), 30).is_empty());
    }

    #[test]
    fn windows_align_to_epoch_multiples() {
        let s = series(&[(1650, 1.0), (1700, 3.0), (1900, 3.0), (5500, 9.0)]);
        let batches = aggregate_batches(&s, 30);
        // 1650 and 1700 share [0, 1800); 1900 opens [1800, 3600); the window
        // [3600, 5400) is empty and produces nothing
        assert_eq!(batches.len(), 3);
        assert_eq!(batches[0].window_start, 0);
        assert_eq!(batches[0].mean, 2.0);
        assert_eq!(batches[1].window_start, 1800);
        assert_eq!(batches[2].window_start, 5400);
    }

    #[test]
    fn outlier_above_band() {
        let b = Batch {
            window_start: 0,
            window_end: 1800,
            min: 9.0,
            max: 13.0,
            mean: 10.0,
            count: 4,
        };
        let events = check_outliers(&b, "v", 0.2);
        assert_eq!(events.len(), 1);
        assert_eq!(events[0].observed, 13.0);
        assert_eq!(events[0].band_low, 8.0);
        assert_eq!(events[0].band_high, 12.0);
        assert_eq!(events[0].kind, EventKind::BandViolation);
    }

    #[test]
    fn degenerate_batch_inside_band() {
        let b = Batch {
            window_start: 0,
            window_end: 1800,
            min: 7.0,
            max: 7.0,
            mean: 7.0,
            count: 1,
        };
        assert!(check_outliers(&b, "v", 0.1).is_empty());
    }

    #[test]
    fn zero_width_band_flags_both_sides() {
        let b = Batch {
            window_start: 0,
            window_end: 1800,
            min: 9.0,
            max: 11.0,
            mean: 10.0,
            count: 3,
        };
        let events = check_outliers(&b, "v", 0.0);
        assert_eq!(events.len(), 2);
        assert_eq!(events[0].observed, 9.0);
        assert_eq!(events[1].observed, 11.0);
    }

    #[test]
    fn negative_mean_band_is_normalized() {
        let b = Batch {
            window_start: 0,
            window_end: 1800,
            min: -12.0,
            max: -8.0,
            mean: -10.0,
            count: 3,
        };
        let events = check_outliers(&b, "v", 0.1);
        // band is [-11, -9]: both extremes violate
        assert_eq!(events.len(), 2);
        assert_eq!(events[0].band_low, -11.0);
        assert_eq!(events[0].band_high, -9.0);
    }

    #[test]
    fn daily_extrema_finds_trough_and_peak() {
        // 48 half-hour batches of a sinusoidal day: trough in batch 3, peak in batch 27
        let mut samples = Vec::new();
        for k in 0..48 {
            let v = match k {
                3 => -5.0,
                27 => 25.0,
                _ => 10.0 + (k as f64) * 0.01,
            };
            samples.push((k * 1800, v));
        }
        let batches = aggregate_batches(&series(&samples), 30);
        assert_eq!(batches.len(), 48);
        let reduced = extract_daily_extrema(&batches, "v", 0);
        assert_eq!(reduced.points.len(), 2);

        // brute-force scan over the 48 batches
        let bf_min = batches
            .iter()
            .min_by(|a, b| a.min.partial_cmp(&b.min).unwrap())
            .unwrap();
        let bf_max = batches
            .iter()
            .max_by(|a, b| a.max.partial_cmp(&b.max).unwrap())
            .unwrap();
        assert_eq!(reduced.points[0], Sample::new(bf_min.window_start, -5.0));
        assert_eq!(reduced.points[1], Sample::new(bf_max.window_start, 25.0));
        assert_eq!(bf_min.window_start, 3 * 1800);
        assert_eq!(bf_max.window_start, 27 * 1800);
    }

    #[test]
    fn constant_day_emits_two_points_at_earliest_batch() {
        let samples: Vec<(i64, f64)> = (0..48).map(|k| (k * 1800, 5.0)).collect();
        let batches = aggregate_batches(&series(&samples), 30);
        let reduced = extract_daily_extrema(&batches, "v", 0);
        assert_eq!(reduced.points.len(), 2);
        assert_eq!(reduced.points[0], Sample::new(0, 5.0));
        assert_eq!(reduced.points[1], Sample::new(0, 5.0));
    }

    #[test]
    fn empty_batches_give_empty_reduction() {
        let reduced = extract_daily_extrema(&[], "v", 0);
        assert!(reduced.is_empty());
        assert_eq!(reduced.method, ReductionMethod::DailyExtrema);
    }

    #[test]
    fn daily_extrema_respects_day_boundary() {
        // two batches either side of a 06:00 boundary fall in different windows
        let s = series(&[(5 * 3600, 1.0), (7 * 3600, 9.0)]);
        let batches = aggregate_batches(&s, 30);
        let reduced = extract_daily_extrema(&batches, "v", 6 * 3600);
        assert_eq!(reduced.points.len(), 4);
    }

    #[test]
    fn trend_change_hand_trace() {
        // values [1,2,3,2,2,3]: trends [+1,+1,-1,0,+1], changes after steps 2,3,4
        let s = series(&[
            (0, 1.0),
            (1, 2.0),
            (2, 3.0),
            (3, 2.0),
            (4, 2.0),
            (5, 3.0),
        ]);
        let reduced = detect_trend_changes(&s, 0.0).unwrap();
        let ts: Vec<i64> = reduced.points.iter().map(|p| p.timestamp).collect();
        assert_eq!(ts, vec![0, 2, 3, 4, 5]);
        let vals: Vec<f64> = reduced.points.iter().map(|p| p.value).collect();
        assert_eq!(vals, vec![1.0, 3.0, 2.0, 2.0, 3.0]);
    }

    #[test]
    fn monotone_series_keeps_only_endpoints() {
        let s = series(&[(0, 1.0), (1, 2.0), (2, 3.0), (3, 4.0)]);
        let reduced = detect_trend_changes(&s, 0.0).unwrap();
        let ts: Vec<i64> = reduced.points.iter().map(|p| p.timestamp).collect();
        assert_eq!(ts, vec![0, 3]);
    }

    #[test]
    fn constant_series_keeps_only_endpoints() {
        let s = series(&[(0, 5.0), (1, 5.0), (2, 5.0)]);
        let reduced = detect_trend_changes(&s, 0.0).unwrap();
        assert_eq!(reduced.points.len(), 2);
    }

    #[test]
    fn too_short_series_is_an_error() {
        let s = series(&[(0, 1.0)]);
        assert!(matches!(
            detect_trend_changes(&s, 0.0),
            Err(Error::SeriesTooShort { needed: 2, got: 1 })
        ));
    }

    #[test]
    fn dead_band_suppresses_small_wiggles() {
        let s = series(&[(0, 0.0), (1, 0.3), (2, 0.1), (3, 0.4), (4, 5.0)]);
        let reduced = detect_trend_changes(&s, 0.5).unwrap();
        // small diffs are 0-trend; the only flip is at the final jump's vertex
        let ts: Vec<i64> = reduced.points.iter().map(|p| p.timestamp).collect();
        assert_eq!(ts, vec![0, 3, 4]);

        let flat = series(&[(0, 0.0), (1, 0.3), (2, 0.1), (3, 0.4), (4, 0.2)]);
        let reduced = detect_trend_changes(&flat, 0.5).unwrap();
        let ts: Vec<i64> = reduced.points.iter().map(|p| p.timestamp).collect();
        assert_eq!(ts, vec![0, 4]);
    }

    /// Independent reference for the trend rule, written as a direct loop.
    fn trend_changes_brute_force(values: &[f64], delta: f64) -> Vec<usize> {
        let n = values.len();
        let mut kept = vec![0usize, n - 1];
        for i in 0..n.saturating_sub(2) {
            let d1 = values[i + 1] - values[i];
            let d2 = values[i + 2] - values[i + 1];
            let t1 = if d1 > delta {
                1
            } else if d1 < -delta {
                -1
            } else {
                0
            };
            let t2 = if d2 > delta {
                1
            } else if d2 < -delta {
                -1
            } else {
                0
            };
            if t1 != t2 {
                kept.push(i + 1);
            }
        }
        kept.sort_unstable();
        kept.dedup();
        kept
    }

    proptest! {
        #[test]
        fn batches_match_brute_force_stats(
            values in proptest::collection::vec(-50.0f64..50.0, 1..200),
            step in 1i64..4000,
        ) {
            let samples: Vec<(i64, f64)> =
                values.iter().enumerate().map(|(i, &v)| (i as i64 * step, v)).collect();
            let s = series(&samples);
            for b in aggregate_batches(&s, 30) {
                let window: Vec<f64> = s
                    .samples
                    .iter()
                    .filter(|x| x.timestamp >= b.window_start && x.timestamp < b.window_end)
                    .map(|x| x.value)
                    .collect();
                prop_assert_eq!(window.len(), b.count);
                let lo = window.iter().cloned().fold(f64::INFINITY, f64::min);
                let hi = window.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                prop_assert_eq!(lo, b.min);
                prop_assert_eq!(hi, b.max);
                prop_assert!(b.min <= b.mean + 1e-12 && b.mean <= b.max + 1e-12);
            }
        }

        #[test]
        fn huge_weight_never_fires_on_positive_means(
            values in proptest::collection::vec(0.1f64..100.0, 1..100),
        ) {
            let samples: Vec<(i64, f64)> =
                values.iter().enumerate().map(|(i, &v)| (i as i64 * 60, v)).collect();
            let s = series(&samples);
            for b in aggregate_batches(&s, 30) {
                prop_assert!(check_outliers(&b, "v", 10.0).is_empty());
            }
        }

        #[test]
        fn trend_matches_brute_force(
            values in proptest::collection::vec(-10.0f64..10.0, 2..80),
            delta in prop_oneof![Just(0.0), 0.0f64..2.0],
        ) {
            let samples: Vec<(i64, f64)> =
                values.iter().enumerate().map(|(i, &v)| (i as i64, v)).collect();
            let s = series(&samples);
            let reduced = detect_trend_changes(&s, delta).unwrap();
            let got: Vec<usize> = reduced
                .points
                .iter()
                .map(|p| p.timestamp as usize)
                .collect();
            let expected = trend_changes_brute_force(&values, delta);
            prop_assert_eq!(got, expected);
        }

        #[test]
        fn reduction_never_grows(
            values in proptest::collection::vec(-10.0f64..10.0, 2..80),
        ) {
            let samples: Vec<(i64, f64)> =
                values.iter().enumerate().map(|(i, &v)| (i as i64 * 1800, v)).collect();
            let s = series(&samples);
            let reduced = detect_trend_changes(&s, 0.0).unwrap();
            prop_assert!(reduced.len() <= s.len());
            let batches = aggregate_batches(&s, 30);
            let extrema = extract_daily_extrema(&batches, "v", 0);
            let mut days: Vec<i64> = batches
                .iter()
                .map(|b| day_index(b.window_start, 0))
                .collect();
            days.dedup();
            prop_assert_eq!(extrema.len(), 2 * days.len());
        }
    }
}
