//! Benchmark matrix: every (trial, model) cell is fitted, scored by mean
//! absolute error and timed. Failed cells are recorded and the run goes on.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ingest::{
    apply_normalization, fit_normalization_for, Curve, Dataset, NormalizationManifest, NormalizeMode,
};
use crate::regress::{ModelConfig, ModelKind, Predictor};
use crate::seed::{derive_seed, name_tag};
use crate::stats::quantile_sorted;
use crate::synth::{generate_trials, make_split, select_complete_well, BenchPlan, GapTrial, TrainTestSplit};

/// Mean of `|pred - truth|`.
pub fn mae(pred: &[f64], truth: &[f64]) -> Result<f64> {
    if pred.len() != truth.len() {
        return Err(Error::Shape {
            expected: truth.len(),
            got: pred.len(),
        });
    }
    if truth.is_empty() {
        return Err(Error::EmptyStatistics);
    }
    Ok(pred.iter().zip(truth).map(|(p, t)| (p - t).abs()).sum::<f64>() / truth.len() as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub enum CellStatus {
    Ok,
    Failed(String),
}

impl CellStatus {
    pub fn is_ok(&self) -> bool {
        matches!(self, CellStatus::Ok)
    }

    fn label(&self) -> String {
        match self {
            CellStatus::Ok => "ok".into(),
            CellStatus::Failed(reason) => format!("failed: {reason}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalRecord {
    pub model: ModelKind,
    pub gap_size: usize,
    pub trial_id: usize,
    pub start_index: usize,
    /// `None` for failed cells.
    pub mae: Option<f64>,
    pub fit_millis: f64,
    pub predict_millis: f64,
    pub status: CellStatus,
}

/// Masked rows of one trial with every model's predictions.
#[derive(Debug, Clone, PartialEq)]
pub struct GapPredictionTrace {
    pub trial_id: usize,
    pub gap_size: usize,
    pub start_index: usize,
    /// Raw depths of the masked rows.
    pub depths: Vec<f64>,
    pub truth: Vec<f64>,
    /// `None` where the model failed on this trial.
    pub predictions: Vec<(ModelKind, Option<Vec<f64>>)>,
}

#[derive(Debug, Clone)]
pub struct BenchmarkRun {
    pub well_id: String,
    pub features: Vec<Curve>,
    pub dropped_features: Vec<Curve>,
    pub manifest: NormalizationManifest,
    pub trials: Vec<GapTrial>,
    pub records: Vec<EvalRecord>,
    pub traces: Vec<GapPredictionTrace>,
    /// Cells whose train/masked disjointness was verified.
    pub leakage_checks: usize,
}

impl BenchmarkRun {
    pub fn failures(&self) -> usize {
        self.records.iter().filter(|r| !r.status.is_ok()).count()
    }
}

/// Fails if any training index falls inside the masked interval.
pub fn check_leakage(split: &TrainTestSplit, trial: &GapTrial) -> Result<()> {
    let masked: BTreeSet<usize> = split.test.indices.iter().copied().collect();
    let overlap = split.train.indices.iter().any(|i| masked.contains(i) || trial.masked().contains(i));
    if overlap {
        return Err(Error::Leakage {
            gap_size: trial.gap_size,
            trial_id: trial.trial_id,
        });
    }
    Ok(())
}

/// Seed for one model on one trial. Keyed by model name so the enabled-model
/// order does not matter.
pub fn cell_seed(seed: u64, model: ModelKind, trial: &GapTrial) -> u64 {
    derive_seed(seed, &[name_tag(model.name()), trial.gap_size as u64, trial.trial_id as u64])
}

fn millis(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn run_cell(split: &TrainTestSplit, config: &ModelConfig, seed: u64) -> (Result<Vec<f64>>, f64, f64) {
    let t = Instant::now();
    let fitted = config.fit(&split.train.features, &split.train.targets, seed);
    let fit_ms = millis(t);
    let fitted = match fitted {
        Ok(f) => f,
        Err(e) => return (Err(e), fit_ms, 0.0),
    };
    let t = Instant::now();
    let pred = fitted.predict(&split.test.features).and_then(|p| {
        if p.iter().all(|v| v.is_finite()) {
            Ok(p)
        } else {
            Err(Error::NumericInstability("non-finite prediction".into()))
        }
    });
    (pred, fit_ms, millis(t))
}

/// Plan features that can be scaled: not the target and not constant over
/// the dataset.
fn scalable_features(dataset: &Dataset, plan: &BenchPlan) -> Vec<Curve> {
    plan.features
        .iter()
        .copied()
        .filter(|&c| c != Curve::Nphi)
        .filter(|&c| {
            let mut values = dataset.wells().iter().flat_map(|w| w.records()).map(|r| c.value(r));
            let first = values.next();
            values.any(|v| Some(v) != first)
        })
        .collect()
}

/// Runs every model on every trial of `plan`. Trials are drawn with
/// `plan.seed`; model randomness is derived from `seed`.
pub fn run_benchmark(
    dataset: &Dataset,
    plan: &BenchPlan,
    configs: &[ModelConfig],
    seed: u64,
    mode: NormalizeMode,
) -> Result<BenchmarkRun> {
    if configs.is_empty() {
        return Err(Error::Parameter("no models enabled".into()));
    }
    let kinds: BTreeSet<ModelKind> = configs.iter().map(ModelConfig::kind).collect();
    if kinds.len() != configs.len() {
        return Err(Error::Parameter("a model is enabled more than once".into()));
    }
    let raw_well = select_complete_well(dataset, plan.well_id.as_deref())?;
    plan.validate(raw_well.len())?;

    let manifest = fit_normalization_for(dataset, &scalable_features(dataset, plan))?;
    let normalized = apply_normalization(dataset, &manifest, mode)?.dataset;
    let well = normalized
        .well(raw_well.well_id())
        .ok_or_else(|| Error::UnknownWell(raw_well.well_id().to_string()))?;

    let trials = generate_trials(well, plan)?;
    let splits = trials
        .iter()
        .map(|t| make_split(well, t, plan))
        .collect::<Result<Vec<_>>>()?;
    for (split, trial) in splits.iter().zip(&trials) {
        check_leakage(split, trial)?;
    }

    let cells: Vec<(usize, usize)> = (0..trials.len())
        .flat_map(|t| (0..configs.len()).map(move |m| (t, m)))
        .collect();
    let outcomes: Vec<_> = cells
        .par_iter()
        .map(|&(t, m)| {
            let trial = &trials[t];
            let config = &configs[m];
            run_cell(&splits[t], config, cell_seed(seed, config.kind(), trial))
        })
        .collect();

    let mut records = Vec::with_capacity(cells.len());
    let mut traces: Vec<GapPredictionTrace> = trials
        .iter()
        .map(|trial| GapPredictionTrace {
            trial_id: trial.trial_id,
            gap_size: trial.gap_size,
            start_index: trial.start_index,
            depths: well.raw_depths()[trial.masked()].to_vec(),
            truth: trial.truth.clone(),
            predictions: Vec::with_capacity(configs.len()),
        })
        .collect();
    for (&(t, m), (pred, fit_millis, predict_millis)) in cells.iter().zip(outcomes) {
        let trial = &trials[t];
        let model = configs[m].kind();
        let scored = pred.and_then(|p| mae(&p, splits[t].truth.values()).map(|e| (e, p)));
        let (mae, status, pred) = match scored {
            Ok((e, p)) => (Some(e), CellStatus::Ok, Some(p)),
            Err(e) => (None, CellStatus::Failed(e.to_string()), None),
        };
        records.push(EvalRecord {
            model,
            gap_size: trial.gap_size,
            trial_id: trial.trial_id,
            start_index: trial.start_index,
            mae,
            fit_millis,
            predict_millis,
            status,
        });
        traces[t].predictions.push((model, pred));
    }

    let split = &splits[0];
    Ok(BenchmarkRun {
        well_id: well.well_id().to_string(),
        features: split.features.clone(),
        dropped_features: split.dropped.clone(),
        manifest,
        leakage_checks: splits.len() * configs.len(),
        trials,
        records,
        traces,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub model: ModelKind,
    pub gap_size: usize,
    pub min: f64,
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
    pub max: f64,
    pub mean: f64,
    /// Successful trials.
    pub n: usize,
}

/// Order statistics of MAE per (model, gap size) over successful cells.
/// Groups where every cell failed are left out.
pub fn summarize(records: &[EvalRecord]) -> Result<Vec<SummaryRow>> {
    if records.is_empty() {
        return Err(Error::EmptyStatistics);
    }
    let mut groups: BTreeMap<(ModelKind, usize), Vec<f64>> = BTreeMap::new();
    for r in records {
        let entry = groups.entry((r.model, r.gap_size)).or_default();
        if let Some(e) = r.mae {
            entry.push(e);
        }
    }
    Ok(groups
        .into_iter()
        .filter(|(_, v)| !v.is_empty())
        .map(|((model, gap_size), mut v)| {
            v.sort_by(f64::total_cmp);
            SummaryRow {
                model,
                gap_size,
                min: v[0],
                q25: quantile_sorted(&v, 0.25),
                median: quantile_sorted(&v, 0.5),
                q75: quantile_sorted(&v, 0.75),
                max: v[v.len() - 1],
                mean: v.iter().sum::<f64>() / v.len() as f64,
                n: v.len(),
            }
        })
        .collect())
}

/// Median MAE of one model at one gap size, if any cell succeeded.
pub fn median_mae(summary: &[SummaryRow], model: ModelKind, gap_size: usize) -> Option<f64> {
    summary
        .iter()
        .find(|r| r.model == model && r.gap_size == gap_size)
        .map(|r| r.median)
}

fn write_header_comments<W: Write>(w: &mut W, echo: &[String]) -> Result<()> {
    for line in echo {
        writeln!(w, "# {line}").map_err(|e| Error::io("<results sink>", e))?;
    }
    Ok(())
}

/// Results CSV. `echo` lines (effective settings) are written first as `#`
/// comments. With `timings = false` the timing columns are left empty, which
/// makes the file a pure function of the inputs.
pub fn write_results_csv<W: Write>(records: &[EvalRecord], echo: &[String], timings: bool, mut sink: W) -> Result<()> {
    write_header_comments(&mut sink, echo)?;
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["model", "gap_size", "trial_id", "start_index", "mae", "fit_millis", "predict_millis", "status"])?;
    for r in records {
        let time = |ms: f64| if timings { format!("{ms:.3}") } else { String::new() };
        w.write_record([
            r.model.name().to_string(),
            r.gap_size.to_string(),
            r.trial_id.to_string(),
            r.start_index.to_string(),
            r.mae.map(|e| e.to_string()).unwrap_or_default(),
            time(r.fit_millis),
            time(r.predict_millis),
            r.status.label(),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<results sink>", e))?;
    Ok(())
}

pub fn write_summary_csv<W: Write>(rows: &[SummaryRow], echo: &[String], mut sink: W) -> Result<()> {
    write_header_comments(&mut sink, echo)?;
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["model", "gap_size", "min", "q25", "median", "q75", "max", "mean", "n"])?;
    for r in rows {
        w.write_record([
            r.model.name().to_string(),
            r.gap_size.to_string(),
            r.min.to_string(),
            r.q25.to_string(),
            r.median.to_string(),
            r.q75.to_string(),
            r.max.to_string(),
            r.mean.to_string(),
            r.n.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<summary sink>", e))?;
    Ok(())
}

/// One trace as CSV: depth, truth, then one column per model (empty where
/// the model failed).
pub fn write_trace_csv<W: Write>(trace: &GapPredictionTrace, sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    let mut header = vec!["depth".to_string(), "truth".to_string()];
    header.extend(trace.predictions.iter().map(|(m, _)| m.name().to_string()));
    w.write_record(&header)?;
    for i in 0..trace.depths.len() {
        let mut row = vec![trace.depths[i].to_string(), trace.truth[i].to_string()];
        row.extend(
            trace
                .predictions
                .iter()
                .map(|(_, p)| p.as_ref().map(|p| p[i].to_string()).unwrap_or_default()),
        );
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| Error::io("<trace sink>", e))?;
    Ok(())
}

/// File name used for a trace: `trace_<gap size>_<trial id>.csv`.
pub fn trace_file_name(trace: &GapPredictionTrace) -> String {
    format!("trace_{:03}_{:03}.csv", trace.gap_size, trace.trial_id)
}
