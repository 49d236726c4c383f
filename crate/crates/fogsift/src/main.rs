//! fogsift command line: synthesize data, run the fog reduction, reconstruct,
//! and score — end to end or stage by stage.
//!
//! Exit codes: 0 on success, 1 on input errors (bad files, flags or config),
//! 2 on internal errors.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fogsift::config::parse_day_boundary;
use fogsift::pipeline::PipelineRun;
use fogsift::report::{write_events_csv, write_reduced_csv};
use fogsift::{
    emit_report, evaluate, generate_synthetic, ingest_csv, reconstruct, run_pipeline,
    Error, Interpolant, PipelineConfig, ReducedSeries, ReductionMethod, SynthProfile,
};

#[derive(Parser)]
#[command(name = "fogsift", version, about = "Fog-node data reduction and cloud reconstruction simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// End-to-end run: ingest, reduce, reconstruct, score, emit reports.
    Run {
        /// Input CSV (timestamp,sensor_id,variable,value).
        #[arg(long)]
        input: PathBuf,
        /// key=value config file; CLI flags override its values.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory for the report files.
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
        #[command(flatten)]
        overrides: ConfigOverrides,
    },
    /// Generate a deterministic synthetic dataset.
    Synth {
        #[arg(long, default_value_t = 30)]
        days: u32,
        #[arg(long, default_value_t = 30)]
        cadence_minutes: u32,
        /// soil-temperature or solar-radiation.
        #[arg(long)]
        profile: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Fog-node reduction only: emits reduced.csv and events.csv.
    Fog {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
        #[command(flatten)]
        overrides: ConfigOverrides,
    },
    /// Reconstruct a dense series from a reduced CSV.
    Reconstruct {
        /// Reduced points CSV (as written by the fog subcommand).
        #[arg(long)]
        reduced: PathBuf,
        /// linear, spline or pchip.
        #[arg(long, default_value = "pchip")]
        method: String,
        /// Reconstruction grid step in seconds.
        #[arg(long, default_value_t = 1800)]
        grid_step: i64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Recompute goodness-of-fit metrics from raw and reconstructed CSVs.
    Report {
        #[arg(long)]
        raw: PathBuf,
        #[arg(long)]
        reconstructed: PathBuf,
        /// Optional reduced CSV; without it the reduction ratio degenerates to 1.
        #[arg(long)]
        reduced: Option<PathBuf>,
        /// Method label for the metrics rows.
        #[arg(long, default_value = "reconstructed")]
        method: String,
        /// Output CSV path for the metrics.
        #[arg(long, default_value = "metrics.csv")]
        out: PathBuf,
    },
}

#[derive(Args)]
struct ConfigOverrides {
    #[arg(long)]
    batch_minutes: Option<u32>,
    #[arg(long)]
    outlier_weight: Option<f64>,
    #[arg(long)]
    trend_delta: Option<f64>,
    /// daily-extrema, trend-change, paa or sax.
    #[arg(long)]
    extraction_method: Option<String>,
    #[arg(long)]
    paa_frames: Option<usize>,
    #[arg(long)]
    sax_alphabet: Option<usize>,
    /// gaussian or histogram.
    #[arg(long)]
    breakpoint_mode: Option<String>,
    /// linear, spline or pchip.
    #[arg(long)]
    interpolant: Option<String>,
    /// HH:MM:SS or seconds after midnight.
    #[arg(long)]
    day_boundary: Option<String>,
}

fn build_config(
    file: Option<&PathBuf>,
    overrides: &ConfigOverrides,
) -> fogsift::Result<PipelineConfig> {
    let mut cfg = PipelineConfig::default();
    if let Some(path) = file {
        let contents = fs::read_to_string(path).map_err(|e| {
            Error::InvalidConfig(format!("cannot read {}: {e}", path.display()))
        })?;
        cfg.parse_file_contents(&contents)?;
    }
    if let Some(v) = overrides.batch_minutes {
        cfg.batch_minutes = v;
    }
    if let Some(v) = overrides.outlier_weight {
        cfg.outlier_weight = v;
    }
    if let Some(v) = overrides.trend_delta {
        cfg.trend_delta = v;
    }
    if let Some(v) = &overrides.extraction_method {
        cfg.extraction_method = v.parse()?;
    }
    if let Some(v) = overrides.paa_frames {
        cfg.paa_frames = v;
    }
    if let Some(v) = overrides.sax_alphabet {
        cfg.sax_alphabet = v;
    }
    if let Some(v) = &overrides.breakpoint_mode {
        cfg.breakpoint_mode = v.parse()?;
    }
    if let Some(v) = &overrides.interpolant {
        cfg.interpolant = v.parse()?;
    }
    if let Some(v) = &overrides.day_boundary {
        cfg.day_boundary = parse_day_boundary(v)?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn cmd_run(input: &Path, config: Option<&PathBuf>, out_dir: &Path, overrides: &ConfigOverrides) -> fogsift::Result<()> {
    let cfg = build_config(config, overrides)?;
    let series_map = ingest_csv(input)?;
    let run: PipelineRun = run_pipeline(&series_map, &cfg)?;
    let files = emit_report(&run, out_dir)?;
    for f in &files {
        println!("wrote {}", f.display());
    }
    for g in &run.report.per_variable {
        println!(
            "{} [{}]: rmse={:.6} r2={:.6} reduction={:.2}x ({} -> {} points)",
            g.variable, g.method, g.rmse, g.r_square, g.reduction_ratio, g.raw_count,
            g.reduced_count
        );
    }
    println!(
        "total: {} raw samples, {} upstream points, {} events",
        run.report.total_raw_samples, run.report.total_upstream_points, run.report.total_events
    );
    Ok(())
}

fn cmd_synth(days: u32, cadence: u32, profile: &str, seed: u64, out: &Path) -> fogsift::Result<()> {
    let profile: SynthProfile = profile.parse()?;
    let series = generate_synthetic(days, cadence, profile, seed)?;
    if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    let mut file = fs::File::create(out)?;
    fogsift::ingest::write_series_csv(&mut file, &[&series], "synthetic")?;
    println!("wrote {} ({} samples)", out.display(), series.len());
    Ok(())
}

fn cmd_fog(input: &Path, config: Option<&PathBuf>, out_dir: &Path, overrides: &ConfigOverrides) -> fogsift::Result<()> {
    let cfg = build_config(config, overrides)?;
    let series_map = ingest_csv(input)?;

    let mut all_reduced = Vec::new();
    let mut all_events = Vec::new();
    for series in series_map.values() {
        let clean = fogsift::preprocess(series, &cfg);
        let (reduced, events, _messages) = fogsift::run_fog_node(&clean, &cfg)?;
        all_reduced.push(reduced);
        all_events.extend(events);
    }

    fs::create_dir_all(out_dir)?;
    let reduced_path = out_dir.join("reduced.csv");
    let mut file = fs::File::create(&reduced_path)?;
    let refs: Vec<&ReducedSeries> = all_reduced.iter().collect();
    write_reduced_csv(&mut file, &refs)?;
    println!("wrote {}", reduced_path.display());

    let events_path = out_dir.join("events.csv");
    let mut file = fs::File::create(&events_path)?;
    write_events_csv(&mut file, &all_events)?;
    println!("wrote {}", events_path.display());
    Ok(())
}

fn cmd_reconstruct(reduced: &Path, method: &str, grid_step: i64, out: &Path) -> fogsift::Result<()> {
    if grid_step <= 0 {
        return Err(Error::InvalidParameters("grid-step must be positive".into()));
    }
    let method: Interpolant = method.parse()?;
    let series_map = ingest_csv(reduced)?;

    if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    let mut file = fs::File::create(out)?;
    let mut reconstructions = Vec::new();
    for (variable, series) in &series_map {
        let reduced_series = ReducedSeries {
            variable: variable.clone(),
            method: ReductionMethod::TrendChange,
            points: series.samples.clone(),
            meta: Default::default(),
        };
        reconstructions.push(reconstruct(&reduced_series, grid_step, method)?);
    }
    let refs: Vec<&fogsift::TimeSeries> = reconstructions.iter().collect();
    fogsift::ingest::write_series_csv(&mut file, &refs, method.as_str())?;
    println!("wrote {}", out.display());
    Ok(())
}

fn cmd_report(
    raw: &Path,
    reconstructed: &Path,
    reduced: Option<&PathBuf>,
    method: &str,
    out: &Path,
) -> fogsift::Result<()> {
    let raw_map = ingest_csv(raw)?;
    let recon_map = ingest_csv(reconstructed)?;
    let reduced_counts: BTreeMap<String, usize> = match reduced {
        Some(path) => ingest_csv(path)?
            .into_iter()
            .map(|(k, v)| (k, v.len()))
            .collect(),
        None => BTreeMap::new(),
    };

    let mut rows = String::from(fogsift::report::METRICS_HEADER);
    rows.push('\n');
    let mut scored = 0;
    for (variable, raw_series) in &raw_map {
        let Some(recon) = recon_map.get(variable) else {
            continue;
        };
        let reduced_count = reduced_counts
            .get(variable)
            .copied()
            .unwrap_or(raw_series.len());
        let g = evaluate(raw_series, recon, reduced_count, method)?;
        rows.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            g.variable, g.method, g.raw_count, g.reduced_count, g.reduction_ratio, g.sse,
            g.r_square, g.rmse
        ));
        scored += 1;
    }
    if scored == 0 {
        return Err(Error::NoOverlap);
    }
    if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    fs::write(out, rows)?;
    println!("wrote {}", out.display());
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };

    let result = match &cli.command {
        Command::Run {
            input,
            config,
            out_dir,
            overrides,
        } => cmd_run(input, config.as_ref(), out_dir, overrides),
        Command::Synth {
            days,
            cadence_minutes,
            profile,
            seed,
            out,
        } => cmd_synth(*days, *cadence_minutes, profile, *seed, out),
        Command::Fog {
            input,
            config,
            out_dir,
            overrides,
        } => cmd_fog(input, config.as_ref(), out_dir, overrides),
        Command::Reconstruct {
            reduced,
            method,
            grid_step,
            out,
        } => cmd_reconstruct(reduced, method, *grid_step, out),
        Command::Report {
            raw,
            reconstructed,
            reduced,
            method,
            out,
        } => cmd_report(raw, reconstructed, reduced.as_ref(), method, out),
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_input_error() { 1 } else { 2 })
        }
    }
}
