//! CSV ingestion and emission.
//!
//! Schema: header `timestamp,sensor_id,variable,value`, ISO-8601 UTC
//! timestamps (`YYYY-MM-DDThh:mm:ssZ`), decimal values with `.` separator,
//! UTF-8, LF or CRLF line endings.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use chrono::{DateTime, NaiveDateTime};

use crate::error::{Error, Result};
use crate::types::{Sample, TimeSeries, Timestamp};

pub const CSV_HEADER: [&str; 4] = ["timestamp", "sensor_id", "variable", "value"];
const TIME_FORMAT: &str = "%Y-%m-%dT%H:%M:%SZ";

pub fn parse_timestamp(s: &str) -> Option<Timestamp> {
    NaiveDateTime::parse_from_str(s, TIME_FORMAT)
        .ok()
        .map(|dt| dt.and_utc().timestamp())
}

pub fn format_timestamp(ts: Timestamp) -> String {
    DateTime::from_timestamp(ts, 0)
        .expect("timestamp in range")
        .format(TIME_FORMAT)
        .to_string()
}

/// Reads a CSV file and groups rows into one validated series per variable.
pub fn ingest_csv(path: &Path) -> Result<BTreeMap<String, TimeSeries>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| match e.kind() {
            csv::ErrorKind::Io(_) => Error::ParseError {
                line: 0,
                reason: format!("cannot open {}: {e}", path.display()),
            },
            _ => Error::ParseError {
                line: 1,
                reason: e.to_string(),
            },
        })?;

    let headers = reader
        .headers()
        .map_err(|e| Error::ParseError {
            line: 1,
            reason: e.to_string(),
        })?
        .clone();
    if headers.iter().collect::<Vec<_>>() != CSV_HEADER {
        return Err(Error::ParseError {
            line: 1,
            reason: format!(
                "expected header {}, got {}",
                CSV_HEADER.join(","),
                headers.iter().collect::<Vec<_>>().join(",")
            ),
        });
    }

    let mut groups: BTreeMap<String, Vec<Sample>> = BTreeMap::new();
    let mut rows = 0usize;
    for record in reader.records() {
        let record = record.map_err(|e| Error::ParseError {
            line: e
                .position()
                .map(|p| p.line() as usize)
                .unwrap_or(0),
            reason: e.to_string(),
        })?;
        let line = record
            .position()
            .map(|p| p.line() as usize)
            .unwrap_or(rows + 2);
        if record.len() != 4 {
            return Err(Error::ParseError {
                line,
                reason: format!("expected 4 fields, got {}", record.len()),
            });
        }
        let ts = parse_timestamp(&record[0]).ok_or_else(|| Error::ParseError {
            line,
            reason: format!("bad timestamp: {}", &record[0]),
        })?;
        let variable = record[2].to_string();
        let value: f64 = record[3].parse().map_err(|_| Error::ParseError {
            line,
            reason: format!("bad value: {}", &record[3]),
        })?;
        if !value.is_finite() {
            return Err(Error::ParseError {
                line,
                reason: format!("non-finite value: {}", &record[3]),
            });
        }
        groups.entry(variable).or_default().push(Sample::new(ts, value));
        rows += 1;
    }
    if rows == 0 {
        return Err(Error::EmptyFile);
    }

    let mut out = BTreeMap::new();
    for (variable, mut samples) in groups {
        samples.sort_by_key(|s| s.timestamp);
        for w in samples.windows(2) {
            if w[0].timestamp == w[1].timestamp {
                return Err(Error::DuplicateTimestamp {
                    variable,
                    timestamp: w[0].timestamp,
                });
            }
        }
        out.insert(
            variable.clone(),
            TimeSeries::new(variable, "", samples),
        );
    }
    Ok(out)
}

/// Writes one or more series in the ingestion schema, with `sensor_id` set
/// to the given tag. LF endings, deterministic ordering and formatting.
pub fn write_series_csv<W: Write>(
    out: &mut W,
    series_list: &[&TimeSeries],
    sensor_id: &str,
) -> Result<()> {
    writeln!(out, "{}", CSV_HEADER.join(","))?;
    for series in series_list {
        for s in &series.samples {
            writeln!(
                out,
                "{},{},{},{}",
                format_timestamp(s.timestamp),
                sensor_id,
                series.variable,
                s.value
            )?;
        }
    }
    Ok(())
}
