//! End-to-end simulator: fog-node processing (steps A/B/C), the upstream
//! message log, and cloud-side reconstruction with goodness-of-fit scoring.
//!
//! Per-variable processing is pure and independent; results are merged in
//! sorted-variable order so runs are deterministic regardless of scheduling.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::config::{BreakpointMode, PipelineConfig};
use crate::error::{Error, Result};
use crate::fog::{
    aggregate_batches, check_outliers, day_index, day_window_start, detect_trend_changes,
    extract_daily_extrema,
};
use crate::gof::evaluate;
use crate::interp::reconstruct;
use crate::paa::{paa_transform, z_normalize};
use crate::preprocess::preprocess;
use crate::sax::{sax_breakpoints, sax_symbolize, symbol_deviation_event};
use crate::types::{
    Batch, Event, GofReport, MethodMeta, ReducedSeries, ReductionMethod, Sample, SaxWord,
    TimeSeries, Timestamp,
};

const DAY_SECONDS: i64 = 86_400;

/// What a fog node sends upstream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MessageKind {
    /// An immediate event notification (one point).
    Event,
    /// A window's reduced point set.
    ReducedBatchSet,
    /// A window's SAX word.
    SaxWordMsg,
}

/// Accounting record for one upstream transmission.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UpstreamMessage {
    pub kind: MessageKind,
    pub variable: String,
    pub payload_point_count: usize,
    pub emitted_at: Timestamp,
}

/// Aggregate results of a full pipeline run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub per_variable: Vec<GofReport>,
    pub units: BTreeMap<String, String>,
    pub total_raw_samples: usize,
    pub total_upstream_points: usize,
    /// Point count scaled by the configured bytes_per_point constant.
    pub total_upstream_bytes_estimate: usize,
    pub total_events: usize,
    pub config_echo: PipelineConfig,
}

/// Everything a run produces, for the report emitter and tests.
#[derive(Debug, Clone)]
pub struct PipelineRun {
    pub report: RunReport,
    pub events: Vec<Event>,
    pub messages: Vec<UpstreamMessage>,
    pub reduced: BTreeMap<String, ReducedSeries>,
    pub reconstructions: BTreeMap<String, TimeSeries>,
    /// The preprocessed per-variable series the cloud scores against.
    pub scored: BTreeMap<String, TimeSeries>,
}

/// Runs steps A, B and C over one preprocessed series.
///
/// Step A batches the samples; step B checks every batch against its
/// acceptance band and emits events immediately; step C reduces every
/// completed 24-hour window with the configured extraction method. The
/// message log is ordered by emission time: batch events as they happen,
/// window summaries when the window closes.
pub fn run_fog_node(
    series: &TimeSeries,
    config: &PipelineConfig,
) -> Result<(ReducedSeries, Vec<Event>, Vec<UpstreamMessage>)> {
    let batches = aggregate_batches(series, config.batch_minutes);

    let mut reduced = ReducedSeries {
        variable: series.variable.clone(),
        method: config.extraction_method,
        points: Vec::new(),
        meta: method_meta(config),
    };
    let mut events = Vec::new();
    let mut messages = Vec::new();

    if batches.is_empty() {
        return Ok((reduced, events, messages));
    }

    // Histogram-mode SAX breakpoints come from the whole series so words
    // stay comparable across windows.
    let sax_bps = if config.extraction_method == ReductionMethod::Sax {
        let means: Vec<f64> = batches.iter().map(|b| b.mean).collect();
        Some(match config.breakpoint_mode {
            BreakpointMode::GaussianEquiprobable => {
                sax_breakpoints(config.sax_alphabet, config.breakpoint_mode, None)?
            }
            BreakpointMode::Histogram => {
                sax_breakpoints(config.sax_alphabet, config.breakpoint_mode, Some(&means))?
            }
        })
    } else {
        None
    };

    let coverage_end = batches.last().unwrap().window_end;
    let mut previous_word: Option<SaxWord> = None;

    let mut i = 0;
    while i < batches.len() {
        let day = day_index(batches[i].window_start, config.day_boundary);
        let mut j = i;
        while j < batches.len()
            && day_index(batches[j].window_start, config.day_boundary) == day
        {
            j += 1;
        }
        let window = &batches[i..j];
        let window_end = day_window_start(day + 1, config.day_boundary);

        // step B: events fire immediately, inside the window's timeline
        for batch in window {
            for event in check_outliers(batch, &series.variable, config.outlier_weight) {
                messages.push(UpstreamMessage {
                    kind: MessageKind::Event,
                    variable: series.variable.clone(),
                    payload_point_count: 1,
                    emitted_at: event.timestamp,
                });
                events.push(event);
            }
        }

        // step C runs only once the 24-hour window has completed
        if window_end <= coverage_end {
            let (points, msg_kind, payload, word) =
                reduce_window(window, series, config, sax_bps.as_deref())?;

            if let Some(word) = word {
                if let Some(prev) = &previous_word {
                    if prev.frame_count == word.frame_count {
                        if let Some(event) = symbol_deviation_event(
                            prev,
                            &word,
                            day_window_start(day, config.day_boundary),
                            &series.variable,
                        )? {
                            messages.push(UpstreamMessage {
                                kind: MessageKind::Event,
                                variable: series.variable.clone(),
                                payload_point_count: 1,
                                emitted_at: event.timestamp,
                            });
                            events.push(event);
                        }
                    }
                }
                previous_word = Some(word);
            }

            if payload > 0 {
                reduced.points.extend(points);
                messages.push(UpstreamMessage {
                    kind: msg_kind,
                    variable: series.variable.clone(),
                    payload_point_count: payload,
                    emitted_at: window_end,
                });
            }
        }

        i = j;
    }

    Ok((reduced, events, messages))
}

fn method_meta(config: &PipelineConfig) -> MethodMeta {
    let mut meta = MethodMeta {
        window_seconds: Some(DAY_SECONDS),
        ..MethodMeta::default()
    };
    match config.extraction_method {
        ReductionMethod::TrendChange => meta.trend_delta = Some(config.trend_delta),
        ReductionMethod::Paa => meta.frames = Some(config.paa_frames),
        ReductionMethod::Sax => {
            meta.frames = Some(config.paa_frames);
            meta.alphabet_size = Some(config.sax_alphabet);
        }
        ReductionMethod::DailyExtrema => {}
    }
    meta
}

/// Applies the configured extraction method to one completed window of
/// batches. Returns the reduced points, the message kind and payload size,
/// and the SAX word when applicable.
fn reduce_window(
    window: &[Batch],
    series: &TimeSeries,
    config: &PipelineConfig,
    sax_bps: Option<&[f64]>,
) -> Result<(Vec<Sample>, MessageKind, usize, Option<SaxWord>)> {
    let means: Vec<f64> = window.iter().map(|b| b.mean).collect();

    match config.extraction_method {
        ReductionMethod::DailyExtrema => {
            let r = extract_daily_extrema(window, &series.variable, config.day_boundary);
            let n = r.points.len();
            Ok((r.points, MessageKind::ReducedBatchSet, n, None))
        }
        ReductionMethod::TrendChange => {
            let points = if window.len() < 2 {
                vec![Sample::new(window[0].window_start, window[0].mean)]
            } else {
                let mini = TimeSeries::new(
                    series.variable.clone(),
                    series.unit.clone(),
                    window
                        .iter()
                        .map(|b| Sample::new(b.window_start, b.mean))
                        .collect(),
                );
                detect_trend_changes(&mini, config.trend_delta)?.points
            };
            let n = points.len();
            Ok((points, MessageKind::ReducedBatchSet, n, None))
        }
        ReductionMethod::Paa => {
            let frames = config.paa_frames.min(window.len());
            let paa = paa_transform(&means, frames)?;
            let points = paa_frame_points(window, &paa.values, frames);
            Ok((points, MessageKind::ReducedBatchSet, frames, None))
        }
        ReductionMethod::Sax => {
            let frames = config.paa_frames.min(window.len());
            let paa = paa_transform(&means, frames)?;
            let points = paa_frame_points(window, &paa.values, frames);
            let symbol_input = match config.breakpoint_mode {
                BreakpointMode::GaussianEquiprobable => {
                    paa_transform(&z_normalize(&means)?, frames)?
                }
                BreakpointMode::Histogram => paa.clone(),
            };
            let word = sax_symbolize(
                &symbol_input,
                sax_bps.expect("breakpoints precomputed for sax"),
                config.sax_alphabet,
            )?;
            Ok((points, MessageKind::SaxWordMsg, frames, Some(word)))
        }
    }
}

/// One point per PAA frame, stamped at the window_start of the frame's
/// middle batch so the timestamps stay on the batch grid.
fn paa_frame_points(window: &[Batch], frame_means: &[f64], frames: usize) -> Vec<Sample> {
    let n = window.len();
    let base = n / frames;
    (0..frames)
        .map(|i| {
            let start = i * base;
            let end = if i == frames - 1 { n } else { start + base };
            let mid = start + (end - start - 1) / 2;
            Sample::new(window[mid].window_start, frame_means[i])
        })
        .collect()
}

/// Reconstructs the reduced series on the raw cadence grid and scores it
/// against `raw_for_scoring`.
pub fn run_cloud(
    reduced: &ReducedSeries,
    raw_for_scoring: &TimeSeries,
    config: &PipelineConfig,
) -> Result<(TimeSeries, GofReport)> {
    let step = native_grid_step(raw_for_scoring).unwrap_or_else(|| config.batch_seconds());
    let mut reconstruction = reconstruct(reduced, step, config.interpolant)?;
    reconstruction.unit = raw_for_scoring.unit.clone();
    let report = evaluate(
        raw_for_scoring,
        &reconstruction,
        reduced.points.len(),
        config.interpolant.as_str(),
    )?;
    Ok((reconstruction, report))
}

/// Most common consecutive delta of the series, the grid the cloud samples
/// on. Ties go to the smaller delta.
fn native_grid_step(series: &TimeSeries) -> Option<i64> {
    if series.len() < 2 {
        return None;
    }
    let mut counts: BTreeMap<i64, usize> = BTreeMap::new();
    for w in series.samples.windows(2) {
        *counts.entry(w[1].timestamp - w[0].timestamp).or_default() += 1;
    }
    counts
        .into_iter()
        .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
        .map(|(d, _)| d)
}

/// Full deterministic run over a set of ingested series.
pub fn run_pipeline(
    series_map: &BTreeMap<String, TimeSeries>,
    config: &PipelineConfig,
) -> Result<PipelineRun> {
    config.validate()?;

    let mut per_variable = Vec::new();
    let mut units = BTreeMap::new();
    let mut events = Vec::new();
    let mut messages = Vec::new();
    let mut reduced_map = BTreeMap::new();
    let mut reconstructions = BTreeMap::new();
    let mut scored = BTreeMap::new();
    let mut total_raw = 0usize;
    let mut total_points = 0usize;

    for (variable, series) in series_map {
        let clean = preprocess(series, config);
        if clean.is_empty() {
            continue;
        }
        let (reduced, var_events, var_messages) = run_fog_node(&clean, config)?;
        if reduced.points.len() < 2 {
            return Err(Error::TooFewKnots {
                needed: 2,
                got: reduced.points.len(),
            });
        }
        let (reconstruction, gof) = run_cloud(&reduced, &clean, config)?;

        total_raw += clean.len();
        total_points += var_messages
            .iter()
            .map(|m| m.payload_point_count)
            .sum::<usize>();
        units.insert(variable.clone(), series.unit.clone());
        per_variable.push(gof);
        events.extend(var_events);
        messages.extend(var_messages);
        reduced_map.insert(variable.clone(), reduced);
        reconstructions.insert(variable.clone(), reconstruction);
        scored.insert(variable.clone(), clean);
    }

    let report = RunReport {
        per_variable,
        units,
        total_raw_samples: total_raw,
        total_upstream_points: total_points,
        total_upstream_bytes_estimate: total_points * config.bytes_per_point as usize,
        total_events: events.len(),
        config_echo: config.clone(),
    };

    Ok(PipelineRun {
        report,
        events,
        messages,
        reduced: reduced_map,
        reconstructions,
        scored,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{generate_synthetic_with, SynthParams, SynthProfile};

    fn clean_soil(days: u32) -> TimeSeries {
        generate_synthetic_with(
            days,
            30,
            SynthProfile::SoilTemperature,
            11,
            SynthParams {
                noise_sigma: 0.0,
                ..SynthParams::default()
            },
        )
        .unwrap()
    }

    fn fine_sinusoid(days: u32) -> TimeSeries {
        // 10-minute cadence so batches hold several samples and the band
        // check has something to test
        generate_synthetic_with(
            days,
            10,
            SynthProfile::SoilTemperature,
            11,
            SynthParams {
                noise_sigma: 0.0,
                ..SynthParams::default()
            },
        )
        .unwrap()
    }

    fn config(method: ReductionMethod) -> PipelineConfig {
        PipelineConfig {
            extraction_method: method,
            ..PipelineConfig::default()
        }
    }

    #[test]
    fn daily_extrema_over_two_days() {
        let series = clean_soil(2);
        let (reduced, events, messages) =
            run_fog_node(&series, &config(ReductionMethod::DailyExtrema)).unwrap();
        assert_eq!(reduced.points.len(), 4);
        assert!(events.is_empty());
        let summaries: Vec<_> = messages
            .iter()
            .filter(|m| m.kind == MessageKind::ReducedBatchSet)
            .collect();
        assert_eq!(summaries.len(), 2);
        assert_eq!(summaries[0].payload_point_count, 2);
    }

    #[test]
    fn injected_spike_adds_exactly_one_event() {
        let mut series = fine_sinusoid(2);
        let baseline = run_fog_node(&series, &config(ReductionMethod::DailyExtrema)).unwrap();
        assert_eq!(baseline.1.len(), 0);

        // lift one sample just past the upper band edge without dragging the
        // batch mean far enough to expose the other two samples below it
        series.samples[30].value += 3.0;
        let (_, events, messages) =
            run_fog_node(&series, &config(ReductionMethod::DailyExtrema)).unwrap();
        assert_eq!(events.len(), 1);
        assert_eq!(events[0].observed, series.samples[30].value);
        let event_msgs = messages
            .iter()
            .filter(|m| m.kind == MessageKind::Event)
            .count();
        assert_eq!(event_msgs, 1);
    }

    #[test]
    fn empty_series_yields_empty_outputs() {
        let series = TimeSeries::new("v", "", vec![]);
        let (reduced, events, messages) =
            run_fog_node(&series, &config(ReductionMethod::TrendChange)).unwrap();
        assert!(reduced.is_empty());
        assert!(events.is_empty());
        assert!(messages.is_empty());
    }

    #[test]
    fn trailing_partial_day_is_not_reduced() {
        let mut series = clean_soil(1);
        let extra: Vec<Sample> = (0..10)
            .map(|k| Sample::new(series.samples.last().unwrap().timestamp + (k + 1) * 1800, 15.0))
            .collect();
        series.samples.extend(extra);
        let (reduced, _, messages) =
            run_fog_node(&series, &config(ReductionMethod::DailyExtrema)).unwrap();
        // only the one complete day is summarized
        assert_eq!(reduced.points.len(), 2);
        assert_eq!(messages.len(), 1);
    }

    #[test]
    fn paa_reduction_emits_frame_points_on_the_batch_grid() {
        let series = clean_soil(2);
        let cfg = config(ReductionMethod::Paa);
        let (reduced, _, messages) = run_fog_node(&series, &cfg).unwrap();
        assert_eq!(reduced.points.len(), 2 * cfg.paa_frames);
        assert_eq!(messages.len(), 2);
        for p in &reduced.points {
            assert_eq!((p.timestamp - series.samples[0].timestamp) % 1800, 0);
        }
    }

    #[test]
    fn sax_reduction_emits_word_messages_and_deviation_events() {
        // two days with very different shapes force a symbol deviation
        let mut series = clean_soil(2);
        for s in series.samples.iter_mut().skip(48) {
            s.value = 40.0 - (s.value - 18.0);
        }
        let cfg = config(ReductionMethod::Sax);
        let (reduced, events, messages) = run_fog_node(&series, &cfg).unwrap();
        assert_eq!(reduced.points.len(), 2 * cfg.paa_frames);
        let words = messages
            .iter()
            .filter(|m| m.kind == MessageKind::SaxWordMsg)
            .count();
        assert_eq!(words, 2);
        let deviations = events
            .iter()
            .filter(|e| e.kind == crate::types::EventKind::SymbolDeviation)
            .count();
        assert_eq!(deviations, 1);
    }

    #[test]
    fn sax_histogram_mode_runs_end_to_end() {
        let series = clean_soil(3);
        let cfg = PipelineConfig {
            extraction_method: ReductionMethod::Sax,
            breakpoint_mode: BreakpointMode::Histogram,
            ..PipelineConfig::default()
        };
        let (reduced, _, messages) = run_fog_node(&series, &cfg).unwrap();
        assert_eq!(reduced.points.len(), 3 * cfg.paa_frames);
        assert_eq!(
            messages
                .iter()
                .filter(|m| m.kind == MessageKind::SaxWordMsg)
                .count(),
            3
        );
    }

    #[test]
    fn message_log_is_ordered_by_emission_time() {
        let mut series = fine_sinusoid(3);
        series.samples[10].value += 10.0;
        series.samples[200].value += 10.0;
        series.samples[400].value -= 10.0;
        let (_, _, messages) =
            run_fog_node(&series, &config(ReductionMethod::TrendChange)).unwrap();
        for w in messages.windows(2) {
            assert!(w[0].emitted_at <= w[1].emitted_at);
        }
        assert!(messages.iter().any(|m| m.kind == MessageKind::Event));
    }

    #[test]
    fn cloud_scores_identity_reduction_perfectly() {
        let series = clean_soil(1);
        let reduced = ReducedSeries {
            variable: series.variable.clone(),
            method: ReductionMethod::TrendChange,
            points: series.samples.clone(),
            meta: MethodMeta::default(),
        };
        let (recon, report) =
            run_cloud(&reduced, &series, &config(ReductionMethod::TrendChange)).unwrap();
        assert_eq!(recon.samples.len(), series.samples.len());
        assert_eq!(report.rmse, 0.0);
        assert_eq!(report.reduction_ratio, 1.0);
        assert_eq!(report.r_square, 1.0);
    }

    #[test]
    fn clean_sinusoid_trend_pchip_scores_high() {
        let mut map = BTreeMap::new();
        let series = clean_soil(10);
        map.insert(series.variable.clone(), series);
        let run = run_pipeline(&map, &config(ReductionMethod::TrendChange)).unwrap();
        let gof = &run.report.per_variable[0];
        assert!(gof.r_square > 0.99, "r_square = {}", gof.r_square);
        assert!(gof.reduction_ratio > 3.0, "ratio = {}", gof.reduction_ratio);
    }

    #[test]
    fn upstream_points_never_exceed_raw_samples() {
        for method in [
            ReductionMethod::DailyExtrema,
            ReductionMethod::TrendChange,
            ReductionMethod::Paa,
            ReductionMethod::Sax,
        ] {
            let mut map = BTreeMap::new();
            let soil = generate_synthetic_with(
                5,
                30,
                SynthProfile::SoilTemperature,
                3,
                SynthParams::default(),
            )
            .unwrap();
            let solar = generate_synthetic_with(
                5,
                30,
                SynthProfile::SolarRadiation,
                3,
                SynthParams::default(),
            )
            .unwrap();
            map.insert(soil.variable.clone(), soil);
            map.insert(solar.variable.clone(), solar);
            let run = run_pipeline(&map, &config(method)).unwrap();
            assert!(
                run.report.total_upstream_points <= run.report.total_raw_samples,
                "{method:?}: {} > {}",
                run.report.total_upstream_points,
                run.report.total_raw_samples
            );
            // conservation: transmitted plus never-transmitted covers the raw count
            let never_transmitted =
                run.report.total_raw_samples - run.report.total_upstream_points;
            assert_eq!(
                never_transmitted + run.report.total_upstream_points,
                run.report.total_raw_samples
            );
            assert_eq!(
                run.report.total_upstream_bytes_estimate,
                run.report.total_upstream_points * 12
            );
            // every emitted report is internally consistent
            for g in &run.report.per_variable {
                assert!(g.reduction_ratio >= 1.0);
                if g.sst > 0.0 {
                    let expect = 1.0 - g.sse / g.sst;
                    assert!((g.r_square - expect).abs() <= 1e-12 * expect.abs().max(1.0));
                }
                if g.rmse > 0.0 {
                    // rmse^2 * n recovers sse for the integer compare count
                    let n = g.sse / (g.rmse * g.rmse);
                    assert!((n - n.round()).abs() < 1e-6, "n = {n}");
                }
            }
        }
    }

    #[test]
    fn event_log_matches_brute_force_band_scan() {
        let mut series = fine_sinusoid(3);
        series.samples[77].value += 25.0;
        series.samples[300].value -= 25.0;
        let cfg = config(ReductionMethod::TrendChange);
        let (_, events, _) = run_fog_node(&series, &cfg).unwrap();

        let mut expected = 0usize;
        for b in aggregate_batches(&series, cfg.batch_minutes) {
            let t0 = b.mean * (1.0 - cfg.outlier_weight);
            let t1 = b.mean * (1.0 + cfg.outlier_weight);
            let (lo, hi) = (t0.min(t1), t0.max(t1));
            if b.min < lo {
                expected += 1;
            }
            if b.max > hi {
                expected += 1;
            }
        }
        assert_eq!(events.len(), expected);
        assert!(expected >= 2);
    }
}
