//! Report emission: JSON summary plus CSV artifacts, written with stable
//! ordering, LF endings and UTF-8 so identical runs produce identical bytes.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::Result;
use crate::ingest::{format_timestamp, write_series_csv, CSV_HEADER};
use crate::pipeline::PipelineRun;
use crate::types::Event;

/// Column order of metrics.csv.
pub const METRICS_HEADER: &str =
    "variable,method,raw_count,reduced_count,reduction_ratio,sse,r_square,rmse";

/// Writes report.json, metrics.csv, events.csv, reduction_histogram.csv and
/// one reconstructed_<variable>.csv per variable. Returns the written paths.
pub fn emit_report(run: &PipelineRun, out_dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();

    let json_path = out_dir.join("report.json");
    let mut json = serde_json::to_string_pretty(&run.report).expect("report serializes");
    json.push('\n');
    fs::write(&json_path, json)?;
    written.push(json_path);

    let metrics_path = out_dir.join("metrics.csv");
    let mut metrics = String::new();
    metrics.push_str(METRICS_HEADER);
    metrics.push('\n');
    for g in &run.report.per_variable {
        metrics.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            g.variable,
            g.method,
            g.raw_count,
            g.reduced_count,
            g.reduction_ratio,
            g.sse,
            g.r_square,
            g.rmse
        ));
    }
    fs::write(&metrics_path, metrics)?;
    written.push(metrics_path);

    let events_path = out_dir.join("events.csv");
    let mut file = fs::File::create(&events_path)?;
    write_events_csv(&mut file, &run.events)?;
    written.push(events_path);

    let histogram_path = out_dir.join("reduction_histogram.csv");
    let mut histogram = String::from("variable,raw_count,reduced_count\n");
    for g in &run.report.per_variable {
        histogram.push_str(&format!(
            "{},{},{}\n",
            g.variable, g.raw_count, g.reduced_count
        ));
    }
    fs::write(&histogram_path, histogram)?;
    written.push(histogram_path);

    for (variable, series) in &run.reconstructions {
        let path = out_dir.join(format!("reconstructed_{variable}.csv"));
        let mut file = fs::File::create(&path)?;
        write_series_csv(
            &mut file,
            &[series],
            run.report.config_echo.interpolant.as_str(),
        )?;
        written.push(path);
    }

    Ok(written)
}

/// Events sorted by (variable, time, kind) for a stable on-disk order.
pub fn write_events_csv<W: Write>(out: &mut W, events: &[Event]) -> Result<()> {
    let mut sorted: Vec<&Event> = events.iter().collect();
    sorted.sort_by(|a, b| {
        (&a.variable, a.timestamp, a.kind.as_str())
            .cmp(&(&b.variable, b.timestamp, b.kind.as_str()))
    });
    writeln!(out, "variable,timestamp,kind,observed,band_low,band_high")?;
    for e in sorted {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            e.variable,
            format_timestamp(e.timestamp),
            e.kind.as_str(),
            e.observed,
            e.band_low,
            e.band_high
        )?;
    }
    Ok(())
}

/// Reduced points in the ingestion schema, so they can be re-ingested by the
/// reconstruct subcommand. The sensor_id column carries the method name.
pub fn write_reduced_csv<W: Write>(
    out: &mut W,
    reduced: &[&crate::types::ReducedSeries],
) -> Result<()> {
    writeln!(out, "{}", CSV_HEADER.join(","))?;
    for r in reduced {
        for p in &r.points {
            writeln!(
                out,
                "{},{},{},{}",
                format_timestamp(p.timestamp),
                r.method.as_str(),
                r.variable,
                p.value
            )?;
        }
    }
    Ok(())
}
