//! Batch commands behind the `wellgap` binary. Each writes its outputs and an
//! `effective_config.txt` into the configured output directory.
//!
//! | command | outputs |
//! |---------|---------|
//! | ingest  | `dataset.csv`, `normalized.csv`, `manifest.txt`, `parse_report.txt` |
//! | gaps    | `gaps.csv`, `gap_stats.txt`, `hist_log10.csv`, `hist_linear_zoom.csv` |
//! | bench   | `results.csv`, `summary.csv`, `trials.csv`, `manifest.txt`, `traces/` |
//! | fill    | `fill.csv`, `fill_meta.txt` |

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use nalgebra::DMatrix;

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::eval::{run_benchmark, summarize, trace_file_name, write_results_csv, write_summary_csv, write_trace_csv, BenchmarkRun};
use crate::gaps::{detect_all, detect_gaps, gap_histogram, stats_block, summarize_gaps, write_gap_csv, Domain, Gap, HistogramRequest, Scale};
use crate::ingest::{
    apply_normalization, fit_normalization_for, read_csv_file, read_las_file, write_csv_file, Curve, Dataset,
    LogRecord, NormalizationManifest, ParseOptions, ParseReport, WellLog, NORMALIZED_CURVES,
};
use crate::regress::{ModelKind, Predictor};
use crate::seed::{derive_seed, name_tag};
use crate::synth::{usable_features, write_trials_csv};

/// Process exit code for an error: 2 for input and schema problems, 3 for
/// bad parameters or configuration, 1 otherwise.
pub fn exit_code(error: &Error) -> i32 {
    match error {
        Error::EmptyInput
        | Error::MissingColumn(_)
        | Error::DuplicateRecord { .. }
        | Error::LasFormat(_)
        | Error::Unsupported(_)
        | Error::MissingCurve(_)
        | Error::DegenerateVariable(_)
        | Error::OutOfRange { .. }
        | Error::Manifest(_)
        | Error::Ordering(_)
        | Error::Csv(_) => 2,
        Error::Parameter(_)
        | Error::Config(_)
        | Error::UnknownWell(_)
        | Error::IneligibleWell { .. }
        | Error::NoCandidate
        | Error::DegenerateFeatures => 3,
        _ => 1,
    }
}

/// Exit code when a benchmark finished with failed cells.
pub const EXIT_CELL_FAILURES: i32 = 4;

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn prepare_out(config: &RunConfig) -> Result<PathBuf> {
    fs::create_dir_all(&config.out_dir).map_err(|e| Error::io(&config.out_dir, e))?;
    write_text(&config.out_dir.join("effective_config.txt"), &config.to_key_values())?;
    Ok(config.out_dir.clone())
}

fn is_las(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("las"))
}

/// Reads every input (`.las` as LAS, anything else as canonical CSV) and
/// merges them into one dataset.
pub fn load_inputs(paths: &[PathBuf], sentinel: f64) -> Result<(Dataset, ParseReport)> {
    if paths.is_empty() {
        return Err(Error::Parameter("no input files given".into()));
    }
    let mut report = ParseReport::default();
    let mut parts = Vec::with_capacity(paths.len());
    for path in paths {
        let (part, r) = if is_las(path) {
            let (well, r) = read_las_file(path, sentinel)?;
            (Dataset::from_wells(vec![well])?, r)
        } else {
            read_csv_file(path, &ParseOptions { sentinel })?
        };
        report.merge(&r);
        parts.push(part);
    }
    Ok((Dataset::merge(parts)?, report))
}

fn varies(dataset: &Dataset, curve: Curve) -> bool {
    let mut values = dataset.wells().iter().flat_map(|w| w.records()).map(|r| curve.value(r));
    let first = values.next();
    values.any(|v| Some(v) != first)
}

/// Manifest over all scaled variables. Coordinates are left out when they do
/// not vary, which is always the case for a single well.
pub fn dataset_manifest(dataset: &Dataset) -> Result<NormalizationManifest> {
    let curves: Vec<Curve> = NORMALIZED_CURVES
        .into_iter()
        .filter(|&c| !matches!(c, Curve::Latitude | Curve::Longitude) || varies(dataset, c))
        .collect();
    fit_normalization_for(dataset, &curves)
}

#[derive(Debug, Clone)]
pub struct IngestOutcome {
    pub dataset: Dataset,
    pub report: ParseReport,
    pub manifest: NormalizationManifest,
    pub clamped: usize,
}

pub fn cmd_ingest(config: &RunConfig) -> Result<IngestOutcome> {
    let (dataset, report) = load_inputs(&config.inputs, config.sentinel)?;
    let manifest = dataset_manifest(&dataset)?;
    let normalized = apply_normalization(&dataset, &manifest, config.mode)?;
    let out = prepare_out(config)?;
    write_csv_file(&dataset, &out.join("dataset.csv"))?;
    write_csv_file(&normalized.dataset, &out.join("normalized.csv"))?;
    write_text(&out.join("manifest.txt"), &manifest.to_key_values())?;
    let mut report_text = report.to_key_values();
    report_text.push_str(&format!("wells={}\nclamped={}\n", dataset.len(), normalized.clamped));
    write_text(&out.join("parse_report.txt"), &report_text)?;
    Ok(IngestOutcome {
        dataset,
        report,
        manifest,
        clamped: normalized.clamped,
    })
}

#[derive(Debug, Clone)]
pub struct GapsOutcome {
    pub gaps: Vec<Gap>,
    /// `None` when no gap was found.
    pub stats_block: Option<String>,
}

pub fn cmd_gaps(config: &RunConfig) -> Result<GapsOutcome> {
    if config.threshold.is_nan() || config.threshold < 0.0 {
        return Err(Error::Parameter(format!("threshold must be >= 0, got {}", config.threshold)));
    }
    if config.bins == 0 {
        return Err(Error::Parameter("histogram needs at least one bin".into()));
    }
    let (dataset, _) = load_inputs(&config.inputs, config.sentinel)?;
    let gaps = detect_all(&dataset, config.threshold)?;
    let out = prepare_out(config)?;
    write_gap_csv(&gaps, create(&out.join("gaps.csv"))?)?;
    let stats_path = out.join("gap_stats.txt");
    if gaps.is_empty() {
        write_text(&stats_path, "count=0\n")?;
        for stale in ["hist_log10.csv", "hist_linear_zoom.csv"] {
            let _ = fs::remove_file(out.join(stale));
        }
        return Ok(GapsOutcome { gaps, stats_block: None });
    }
    let block = stats_block(&summarize_gaps(&gaps)?);
    write_text(&stats_path, &block)?;
    let requests = [
        ("hist_log10.csv", Scale::Log10, Domain::Full),
        ("hist_linear_zoom.csv", Scale::Linear, Domain::UpperQuartile),
    ];
    for (name, scale, domain) in requests {
        let hist = gap_histogram(
            &gaps,
            HistogramRequest {
                scale,
                bin_count: config.bins,
                domain,
            },
        )?;
        hist.write_csv(create(&out.join(name))?)?;
    }
    Ok(GapsOutcome {
        gaps,
        stats_block: Some(block),
    })
}

/// Effective model settings echoed at the top of results files.
fn echo_lines(config: &RunConfig, run: &BenchmarkRun) -> Vec<String> {
    let mut lines = vec![
        format!("well={}", run.well_id),
        format!("features={}", run.features.iter().map(|c| c.key()).collect::<Vec<_>>().join(",")),
        format!("dropped_features={}", run.dropped_features.iter().map(|c| c.key()).collect::<Vec<_>>().join(",")),
    ];
    lines.extend(config.lines().into_iter().filter(|l| {
        l.starts_with("seed=")
            || l.starts_with("sizes=")
            || l.starts_with("trials=")
            || l.starts_with("models=")
            || config.models.iter().any(|m| l.starts_with(&format!("model.{}.", m.key())))
    }));
    lines
}

pub fn cmd_bench(config: &RunConfig) -> Result<BenchmarkRun> {
    let (dataset, _) = load_inputs(&config.inputs, config.sentinel)?;
    let mut plan = config.plan.clone();
    plan.seed = config.seed;
    let run = run_benchmark(&dataset, &plan, &config.enabled_models(), config.seed, config.mode)?;
    let out = prepare_out(config)?;
    let echo = echo_lines(config, &run);
    write_results_csv(&run.records, &echo, true, create(&out.join("results.csv"))?)?;
    write_summary_csv(&summarize(&run.records)?, &echo, create(&out.join("summary.csv"))?)?;
    write_trials_csv(&run.trials, create(&out.join("trials.csv"))?)?;
    write_text(&out.join("manifest.txt"), &run.manifest.to_key_values())?;
    let traces = out.join("traces");
    fs::create_dir_all(&traces).map_err(|e| Error::io(&traces, e))?;
    for trace in &run.traces {
        write_trace_csv(trace, create(&traces.join(trace_file_name(trace)))?)?;
    }
    Ok(run)
}

/// Most common spacing between consecutive depths, at millimetre resolution.
/// Ties go to the smaller step.
pub fn modal_step(depths: &[f64]) -> Option<f64> {
    let mut counts: BTreeMap<i64, usize> = BTreeMap::new();
    for w in depths.windows(2) {
        *counts.entry(((w[1] - w[0]) * 1000.0).round() as i64).or_default() += 1;
    }
    counts
        .into_iter()
        .filter(|&(mm, _)| mm > 0)
        .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
        .map(|(mm, _)| mm as f64 / 1000.0)
}

/// Grid depths strictly inside a gap: `before + k * step` while below
/// `after - step / 2`.
pub fn gap_grid(before: f64, after: f64, step: f64) -> Vec<f64> {
    (1..)
        .map(|k| before + k as f64 * step)
        .take_while(|&d| d < after - step / 2.0)
        .collect()
}

/// Record at `depth` between `a` and `b`, every curve linearly interpolated
/// except depth, which is exact.
pub fn interpolate_record(a: &LogRecord, b: &LogRecord, depth: f64) -> LogRecord {
    let t = (depth - a.depth) / (b.depth - a.depth);
    let mut r = *a;
    for c in Curve::ALL {
        *c.value_mut(&mut r) = c.value(a) + t * (c.value(b) - c.value(a));
    }
    r.depth = depth;
    r
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilledPoint {
    pub depth: f64,
    pub value: f64,
}

#[derive(Debug, Clone)]
pub struct FillOutcome {
    pub well_id: String,
    pub model: ModelKind,
    pub gaps: Vec<Gap>,
    /// `None` when the well has no gaps.
    pub grid_step: Option<f64>,
    pub points: Vec<FilledPoint>,
}

/// Predicts the target on the well's own depth grid across every gap,
/// training on all existing records of that well.
pub fn fill_well(dataset: &Dataset, well: &WellLog, config: &RunConfig) -> Result<FillOutcome> {
    let model = config.fill_model;
    let gaps = detect_gaps(well, config.threshold)?;
    let mut outcome = FillOutcome {
        well_id: well.well_id().to_string(),
        model,
        gaps,
        grid_step: None,
        points: Vec::new(),
    };
    if outcome.gaps.is_empty() {
        return Ok(outcome);
    }
    let step = modal_step(well.raw_depths()).ok_or(Error::EmptyInput)?;
    outcome.grid_step = Some(step);

    let plan = &config.plan;
    let scalable: Vec<Curve> = plan
        .features
        .iter()
        .copied()
        .filter(|&c| c != Curve::Nphi && varies(dataset, c))
        .collect();
    let manifest = fit_normalization_for(dataset, &scalable)?;
    let scale = |r: &LogRecord| {
        let mut r = *r;
        for c in manifest.curves() {
            *c.value_mut(&mut r) = manifest.normalize(c, c.value(&r));
        }
        r
    };
    let (features, _) = usable_features(well, &plan.features);
    if features.is_empty() {
        return Err(Error::DegenerateFeatures);
    }
    let records: Vec<LogRecord> = well.records().iter().map(scale).collect();
    let x = DMatrix::from_fn(records.len(), features.len(), |i, j| features[j].value(&records[i]));
    let y: Vec<f64> = records.iter().map(|r| plan.target.value(r)).collect();
    let seed = derive_seed(config.seed, &[name_tag(model.name()), name_tag(well.well_id())]);
    let fitted = config.model_config(model).fit(&x, &y, seed)?;

    let raw = well.records();
    let mut grid_records = Vec::new();
    for gap in &outcome.gaps {
        let i = raw.partition_point(|r| r.depth < gap.depth_after);
        let (a, b) = (&raw[i - 1], &raw[i]);
        for depth in gap_grid(gap.depth_before, gap.depth_after, step) {
            grid_records.push(interpolate_record(a, b, depth));
        }
    }
    let scaled: Vec<LogRecord> = grid_records.iter().map(scale).collect();
    let xq = DMatrix::from_fn(scaled.len(), features.len(), |i, j| features[j].value(&scaled[i]));
    let pred = fitted.predict(&xq)?;
    if pred.iter().any(|v| !v.is_finite()) {
        return Err(Error::NumericInstability(format!("{model} produced non-finite fill values")));
    }
    outcome.points = grid_records
        .iter()
        .zip(pred)
        .map(|(r, value)| FilledPoint { depth: r.depth, value })
        .collect();
    Ok(outcome)
}

pub fn cmd_fill(config: &RunConfig) -> Result<FillOutcome> {
    let (dataset, _) = load_inputs(&config.inputs, config.sentinel)?;
    let id = config
        .plan
        .well_id
        .as_deref()
        .ok_or_else(|| Error::Parameter("fill needs a well (--well or well=)".into()))?;
    let well = dataset.well(id).ok_or_else(|| Error::UnknownWell(id.to_string()))?;
    let outcome = fill_well(&dataset, well, config)?;
    let out = prepare_out(config)?;
    let mut w = csv::Writer::from_writer(create(&out.join("fill.csv"))?);
    w.write_record(["well", "depth", config.plan.target.key()])?;
    for p in &outcome.points {
        w.write_record([outcome.well_id.clone(), p.depth.to_string(), p.value.to_string()])?;
    }
    w.flush().map_err(|e| Error::io(out.join("fill.csv"), e))?;
    let meta = format!(
        "well={}\nmodel={}\ngaps={}\npoints={}\ngrid_step={}\n",
        outcome.well_id,
        outcome.model.name(),
        outcome.gaps.len(),
        outcome.points.len(),
        outcome.grid_step.map_or_else(|| "none".to_string(), |s| s.to_string()),
    );
    write_text(&out.join("fill_meta.txt"), &meta)?;
    Ok(outcome)
}
