//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use nalgebra::DMatrix;

use common::{bench_files, bundled_well, median, ols_oracle, ols_problem, rank_quantile, value_of, Lcg};
use wellgap::commands::{cmd_bench, cmd_gaps};
use wellgap::config::RunConfig;
use wellgap::eval::{check_leakage, run_benchmark, summarize, EvalRecord};
use wellgap::gaps::detect_gaps;
use wellgap::ingest::{write_csv_file, Dataset, LogRecord, NormalizeMode, WellLog};
use wellgap::regress::{
    brr_fit, fit_tree, mlp_fit, ols_fit, ransac_fit, rf_fit, BrrParams, ForestParams, MlpParams, MlpState, ModelConfig,
    ModelKind, Node, Predictor, RansacParams, Tree,
};
use wellgap::synth::{generate_trials, make_split, BenchPlan};
use wellgap::synthetic::{synthetic_corpus, synthetic_well, CorpusSpec, Relation};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn record(depth: f64) -> LogRecord {
    LogRecord {
        depth,
        rhob: 2.3,
        dt: 90.0,
        gr: 60.0,
        nphi: 0.2,
        latitude: 53.0,
        longitude: 4.0,
    }
}

fn c1_gap_census() -> Outcome {
    let (dataset, planted) = synthetic_corpus(&CorpusSpec::default(), 11).map_err(|e| e.to_string())?;
    ensure(dataset.len() == 50 && planted.len() == 120, || format!("corpus has {} wells, {} gaps", dataset.len(), planted.len()))?;
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("corpus.csv");
    write_csv_file(&dataset, &input).map_err(|e| e.to_string())?;

    let config = RunConfig {
        inputs: vec![input],
        out_dir: dir.path().join("out"),
        ..RunConfig::default()
    };
    let start = Instant::now();
    cmd_gaps(&config).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let block = fs::read_to_string(dir.path().join("out/gap_stats.txt")).unwrap();

    // brute force: every consecutive pair in the re-read corpus whose spacing
    // clearly exceeds any sampling step (all steps are <= 0.2, all gaps >= 0.3)
    let text = fs::read_to_string(dir.path().join("corpus.csv")).unwrap();
    let mut scanned = Vec::new();
    let mut prev: Option<(String, f64)> = None;
    for line in text.lines().skip(1) {
        let mut f = line.split(',');
        let well = f.next().unwrap().to_string();
        let depth: f64 = f.next().unwrap().parse().unwrap();
        if let Some((w, d)) = &prev {
            if *w == well && depth - d > 0.25 {
                scanned.push(depth - d);
            }
        }
        prev = Some((well, depth));
    }
    let planted_lengths: Vec<f64> = planted.iter().map(|p| p.length()).collect();
    ensure(scanned.len() == 120, || format!("brute-force scan found {} gaps", scanned.len()))?;

    ensure(value_of(&block, "count") == 120.0, || format!("count in block:\n{block}"))?;
    let checks = [("min", 0.0), ("25%", 0.25), ("50%", 0.5), ("75%", 0.75), ("max", 1.0)];
    for (key, q) in checks {
        let expect = rank_quantile(&scanned, q);
        let planted_q = rank_quantile(&planted_lengths, q);
        let got = value_of(&block, key);
        ensure(close(got, expect, 1e-9) && close(got, planted_q, 1e-9), || {
            format!("{key}: reported {got}, scan oracle {expect}, planted {planted_q}")
        })?;
    }
    ensure(elapsed < Duration::from_secs(5), || format!("cmd_gaps took {elapsed:?}"))?;
    Ok(format!(
        "count=120, quartiles match oracle, min={:.1} max={:.1}, {:.0} ms",
        value_of(&block, "min"),
        value_of(&block, "max"),
        elapsed.as_secs_f64() * 1e3
    ))
}

fn c2_threshold_semantics() -> Outcome {
    let well = WellLog::new("T", [10.0, 10.1, 10.2, 10.5, 10.6].map(record).to_vec()).unwrap();
    let at_02 = detect_gaps(&well, 0.2).map_err(|e| e.to_string())?;
    ensure(at_02.len() == 1, || format!("{} gaps at 0.2", at_02.len()))?;
    let g = &at_02[0];
    ensure(g.depth_before == 10.2 && g.depth_after == 10.5 && close(g.length, 0.3, 1e-12), || format!("{g:?}"))?;
    let at_03 = detect_gaps(&well, 0.3).map_err(|e| e.to_string())?;
    ensure(at_03.is_empty(), || format!("{} gaps at 0.3", at_03.len()))?;
    Ok("one 0.3 m gap at threshold 0.2, none at 0.3".into())
}

fn c3_ols() -> Outcome {
    let oracle = ols_oracle();
    ensure(oracle.len() == 100, || "oracle file incomplete".into())?;
    let (mut worst_rel, mut worst_orth) = (0.0f64, 0.0f64);
    for (k, expect) in oracle.iter().enumerate() {
        let (x, y) = ols_problem(k as u64);
        let s = ols_fit(&x, &y).map_err(|e| e.to_string())?;
        let got = [s.intercept, s.weights[0], s.weights[1], s.weights[2]];
        for (g, e) in got.iter().zip(expect) {
            worst_rel = worst_rel.max((g - e).abs() / e.abs());
        }
        let pred = s.predict(&x).unwrap();
        let resid: Vec<f64> = y.iter().zip(&pred).map(|(a, b)| a - b).collect();
        worst_orth = worst_orth.max(resid.iter().sum::<f64>().abs());
        for j in 0..3 {
            let dot: f64 = (0..50).map(|i| x[(i, j)] * resid[i]).sum();
            worst_orth = worst_orth.max(dot.abs());
        }
    }
    ensure(worst_rel <= 1e-8, || format!("worst relative error {worst_rel:e}"))?;
    ensure(worst_orth <= 1e-8, || format!("worst |X^T r| {worst_orth:e}"))?;
    Ok(format!("100 problems, max rel err {worst_rel:.1e}, max |X^T r| {worst_orth:.1e}"))
}

fn c4_brr_limit() -> Outcome {
    let mut g = Lcg::new(4);
    let x = DMatrix::from_fn(200, 3, |_, _| g.uniform(-1.0, 1.0));
    let y: Vec<f64> = (0..200).map(|i| 0.7 + 1.3 * x[(i, 0)] - 0.4 * x[(i, 1)] + 2.1 * x[(i, 2)]).collect();
    let ols = ols_fit(&x, &y).map_err(|e| e.to_string())?;
    let near_zero = BrrParams {
        prior_a: 1e-12,
        prior_b: 1e-12,
        lambda_init: 1e-12,
        ..BrrParams::default()
    };
    let diff = |s: &wellgap::regress::BrrState| {
        s.weights.iter().zip(&ols.weights).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    };
    let limit = brr_fit(&x, &y, &near_zero).map_err(|e| e.to_string())?;
    let default = brr_fit(&x, &y, &BrrParams::default()).map_err(|e| e.to_string())?;
    let (d0, d1) = (diff(&limit), diff(&default));
    ensure(d0 <= 1e-6, || format!("near-zero priors: max |w_brr - w_ols| = {d0:e}"))?;
    ensure(d1 <= 1e-3, || format!("default priors: max |w_brr - w_ols| = {d1:e}"))?;
    ensure(limit.alpha.is_finite() && limit.alpha > 0.0 && limit.lambda.is_finite() && limit.lambda > 0.0, || {
        format!("precisions alpha={} lambda={}", limit.alpha, limit.lambda)
    })?;
    Ok(format!("near-zero priors {d0:.1e}, default priors {d1:.1e}"))
}

fn c5_ransac() -> Outcome {
    let mut worst = 0.0f64;
    for seed in 0..20u64 {
        let mut g = Lcg::new(500 + seed);
        let n = 100;
        let xs: Vec<f64> = (0..n).map(|_| g.uniform(0.0, 1.0)).collect();
        // 20 outliers at distinct random rows
        let mut outliers = BTreeSet::new();
        while outliers.len() < 20 {
            outliers.insert((g.next() * n as f64) as usize);
        }
        let y: Vec<f64> = xs
            .iter()
            .enumerate()
            .map(|(i, x)| 2.0 * x + 1.0 + if outliers.contains(&i) { 10.0 } else { 0.0 })
            .collect();
        let x = DMatrix::from_column_slice(n, 1, &xs);
        let s = ransac_fit(&x, &y, &RansacParams::default(), seed).map_err(|e| format!("seed {seed}: {e}"))?;
        let err = (s.base.weights[0] - 2.0).abs().max((s.base.intercept - 1.0).abs());
        worst = worst.max(err);
        ensure(err <= 1e-9, || format!("seed {seed}: slope {} intercept {}", s.base.weights[0], s.base.intercept))?;
        for (i, &inlier) in s.inlier_mask.iter().enumerate() {
            ensure(inlier != outliers.contains(&i), || format!("seed {seed}: row {i} misclassified"))?;
        }
    }
    Ok(format!("20 seeds, max coefficient error {worst:.1e}, masks exact"))
}

/// Exhaustive best-split tree: tries every (feature, midpoint) and keeps the
/// lowest weighted SSE, first feature then first threshold winning ties.
#[derive(Debug, PartialEq)]
enum OracleTree {
    Leaf(f64),
    Split(usize, f64, Box<OracleTree>, Box<OracleTree>),
}

fn sse(v: &[f64]) -> f64 {
    let m = v.iter().sum::<f64>() / v.len() as f64;
    v.iter().map(|x| (x - m).powi(2)).sum()
}

fn oracle_tree(rows: &[Vec<f64>], y: &[f64]) -> OracleTree {
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    let parent = sse(y);
    let mut best: Option<(f64, usize, f64)> = None;
    for f in 0..rows[0].len() {
        let mut values: Vec<f64> = rows.iter().map(|r| r[f]).collect();
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        values.dedup();
        for w in values.windows(2) {
            let t = (w[0] + w[1]) / 2.0;
            let (l, r): (Vec<f64>, Vec<f64>) = {
                let l = rows.iter().zip(y).filter(|(x, _)| x[f] <= t).map(|(_, v)| *v).collect();
                let r = rows.iter().zip(y).filter(|(x, _)| x[f] > t).map(|(_, v)| *v).collect();
                (l, r)
            };
            let cost = sse(&l) + sse(&r);
            if cost < parent - 1e-12 && best.is_none_or(|b| cost < b.0 - 1e-12) {
                best = Some((cost, f, t));
            }
        }
    }
    match best {
        None => OracleTree::Leaf(mean),
        Some((_, f, t)) => {
            let (mut lr, mut ly, mut rr, mut ry) = (vec![], vec![], vec![], vec![]);
            for (r, v) in rows.iter().zip(y) {
                if r[f] <= t {
                    lr.push(r.clone());
                    ly.push(*v);
                } else {
                    rr.push(r.clone());
                    ry.push(*v);
                }
            }
            OracleTree::Split(f, t, Box::new(oracle_tree(&lr, &ly)), Box::new(oracle_tree(&rr, &ry)))
        }
    }
}

fn as_oracle(tree: &Tree, at: usize) -> OracleTree {
    match tree.nodes[at] {
        Node::Leaf { value } => OracleTree::Leaf(value),
        Node::Split { feature, threshold, left, right } => {
            OracleTree::Split(feature, threshold, Box::new(as_oracle(tree, left)), Box::new(as_oracle(tree, right)))
        }
    }
}

fn c6_random_forest() -> Outcome {
    let xs = [1.0, 2.0, 3.0, 4.0];
    let y = [1.0, 1.0, 5.0, 6.0];
    let x = DMatrix::from_column_slice(4, 1, &xs);
    let params = ForestParams {
        n_trees: 1,
        bootstrap: false,
        ..ForestParams::default()
    };
    let tree = fit_tree(&x, &y, &[0, 1, 2, 3], &params, 0);
    // by hand: cuts at 1.5 / 2.5 / 3.5 leave SSE 14 / 0.5 / 10.67, so 2.5
    // wins; the right pair [5, 6] then splits at 3.5
    let hand = OracleTree::Split(
        0,
        2.5,
        Box::new(OracleTree::Leaf(1.0)),
        Box::new(OracleTree::Split(0, 3.5, Box::new(OracleTree::Leaf(5.0)), Box::new(OracleTree::Leaf(6.0)))),
    );
    let enumerated = oracle_tree(&xs.iter().map(|&v| vec![v]).collect::<Vec<_>>(), &y);
    ensure(enumerated == hand, || format!("enumeration oracle disagrees with hand tree: {enumerated:?}"))?;
    let got = as_oracle(&tree, 0);
    ensure(got == hand, || format!("fitted tree {got:?}"))?;
    let forest = rf_fit(&x, &y, &params, 0).map_err(|e| e.to_string())?;
    ensure(as_oracle(&forest.trees[0], 0) == hand, || "rf_fit single tree differs".into())?;

    let mut g = Lcg::new(6);
    let mut checked = 0;
    for seed in 0..10 {
        let x = DMatrix::from_fn(60, 3, |_, _| g.uniform(-1.0, 1.0));
        let y: Vec<f64> = (0..60).map(|i| (3.0 * x[(i, 0)]).sin() + x[(i, 1)] * x[(i, 2)]).collect();
        let lo = y.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = y.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let f = rf_fit(&x, &y, &ForestParams { n_trees: 20, ..ForestParams::default() }, seed).map_err(|e| e.to_string())?;
        let probe = DMatrix::from_fn(200, 3, |_, _| g.uniform(-3.0, 3.0));
        for p in f.predict(&probe).unwrap() {
            ensure(p >= lo && p <= hi, || format!("prediction {p} outside [{lo}, {hi}]"))?;
            checked += 1;
        }
    }
    Ok(format!("tree matches exhaustive oracle; {checked} forest predictions within target range"))
}

fn c7_mlp() -> Outcome {
    let rows = [0.2, -0.5, 0.9, 0.1, -0.3, 0.7];
    let y = [0.4, -0.1, 0.25];
    let mut g = Lcg::new(7);
    let mut worst = 0.0f64;
    for point in 0..10 {
        let mut state = MlpState::init(2, 4, point);
        let theta: Vec<f64> = state.params().iter().map(|p| p + g.uniform(-0.5, 0.5)).collect();
        state.set_params(&theta);
        let (_, analytic) = state.loss_and_gradient(&rows, &y);
        let h = 1e-5;
        for k in 0..theta.len() {
            let mut probe = state.clone();
            let mut t = theta.clone();
            t[k] += h;
            probe.set_params(&t);
            let up = probe.loss_and_gradient(&rows, &y).0;
            t[k] -= 2.0 * h;
            probe.set_params(&t);
            let down = probe.loss_and_gradient(&rows, &y).0;
            let numeric = (up - down) / (2.0 * h);
            // relative error, with a floor so exactly-zero components compare absolutely
            let rel = (analytic[k] - numeric).abs() / analytic[k].abs().max(numeric.abs()).max(1e-6);
            worst = worst.max(rel);
        }
    }
    ensure(worst < 1e-4, || format!("max relative gradient error {worst:e}"))?;

    let mut g = Lcg::new(77);
    let xs: Vec<f64> = (0..200).map(|_| g.uniform(0.0, 1.0)).collect();
    let ys: Vec<f64> = xs.iter().map(|x| 0.3 * x + 0.2).collect();
    let x = DMatrix::from_column_slice(200, 1, &xs);
    let s = mlp_fit(&x, &ys, &MlpParams::default(), 7).map_err(|e| e.to_string())?;
    let mse = s.loss(&x, &ys);
    ensure(s.loss_trace.len() == 200, || format!("{} epochs recorded", s.loss_trace.len()))?;
    ensure(mse < 1e-4, || format!("train MSE after 200 epochs {mse:e}"))?;
    Ok(format!("max gradient rel err {worst:.1e} over 10 points; train MSE {mse:.1e} after 200 epochs"))
}

fn c8_protocol() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let run_once = |name: &str| -> Result<(Duration, usize, usize), String> {
        let config = RunConfig {
            inputs: vec![bundled_well()],
            out_dir: dir.path().join(name),
            seed: 20,
            plan: BenchPlan { seed: 20, ..BenchPlan::default() },
            ..RunConfig::default()
        };
        let start = Instant::now();
        let run = cmd_bench(&config).map_err(|e| e.to_string())?;
        Ok((start.elapsed(), run.records.len(), run.traces.len()))
    };
    let (t1, records, traces) = run_once("a")?;
    let (_, records2, _) = run_once("b")?;
    ensure(records == 450 && records2 == 450, || format!("{records} records"))?;
    ensure(traces == 90, || format!("{traces} traces"))?;
    let a = bench_files(&dir.path().join("a"));
    let b = bench_files(&dir.path().join("b"));
    let results = a.iter().find(|(n, _)| n == "results.csv").unwrap();
    let rows = results.1.lines().filter(|l| !l.starts_with('#')).count() - 1;
    ensure(rows == 450, || format!("results.csv has {rows} rows"))?;
    let trace_files = a.iter().filter(|(n, _)| n.starts_with("traces")).count();
    ensure(trace_files == 90, || format!("{trace_files} trace files"))?;
    ensure(a == b, || {
        let bad: Vec<_> = a.iter().zip(&b).filter(|(x, y)| x != y).map(|(x, _)| x.0.clone()).collect();
        format!("runs differ in {bad:?}")
    })?;
    ensure(t1 < Duration::from_secs(120), || format!("run took {t1:?}"))?;
    Ok(format!("450 records, 90 traces, {} files identical across runs, {:.1} s per run", a.len(), t1.as_secs_f64()))
}

fn medians(records: &[EvalRecord], model: ModelKind, gap_size: usize) -> Option<f64> {
    let v: Vec<f64> = records
        .iter()
        .filter(|r| r.model == model && r.gap_size == gap_size)
        .filter_map(|r| r.mae)
        .collect();
    (v.len() == records.iter().filter(|r| r.model == model && r.gap_size == gap_size).count() && !v.is_empty())
        .then(|| median(&v))
}

fn all_models() -> Vec<ModelConfig> {
    ModelKind::ALL.into_iter().map(ModelConfig::default_for).collect()
}

fn c9_planted_relationships() -> Outcome {
    let linear = Dataset::from_wells(vec![synthetic_well("LIN", 1000, Relation::Linear, 9).unwrap()]).unwrap();
    let plan = BenchPlan { seed: 9, ..BenchPlan::default() };
    let run = run_benchmark(&linear, &plan, &all_models(), 9, NormalizeMode::Strict).map_err(|e| e.to_string())?;
    ensure(run.failures() == 0, || format!("{} failed cells", run.failures()))?;
    let ols_max = run
        .records
        .iter()
        .filter(|r| r.model == ModelKind::Ols)
        .map(|r| r.mae.unwrap())
        .fold(0.0, f64::max);
    ensure(ols_max < 1e-8, || format!("OLS max MAE {ols_max:e}"))?;
    let mut worst = (0.0, ModelKind::Ols, 0);
    for kind in ModelKind::ALL {
        for &size in &plan.gap_sizes {
            let m = medians(&run.records, kind, size).ok_or_else(|| format!("{kind} missing cells"))?;
            if m > worst.0 {
                worst = (m, kind, size);
            }
        }
    }
    ensure(worst.0 < 0.02, || format!("{} median MAE {} at size {}", worst.1, worst.0, worst.2))?;

    let plateau = Dataset::from_wells(vec![synthetic_well("PLT", 1000, Relation::Plateau, 9).unwrap()]).unwrap();
    let plan = BenchPlan {
        gap_sizes: vec![66],
        seed: 9,
        ..BenchPlan::default()
    };
    let configs = [ModelConfig::Ols, ModelConfig::default_for(ModelKind::Rf)];
    let run = run_benchmark(&plateau, &plan, &configs, 9, NormalizeMode::Strict).map_err(|e| e.to_string())?;
    let rf = medians(&run.records, ModelKind::Rf, 66).ok_or("RF cells failed")?;
    let ols = medians(&run.records, ModelKind::Ols, 66).ok_or("OLS cells failed")?;
    ensure(rf < ols, || format!("plateau: RF median {rf} vs OLS median {ols}"))?;
    Ok(format!(
        "linear: OLS max MAE {ols_max:.1e}, worst median {:.4} ({} @ {}); plateau: RF {rf:.4} < OLS {ols:.4}",
        worst.0, worst.1, worst.2
    ))
}

fn c10_mae_band() -> Outcome {
    let noisy = Dataset::from_wells(vec![synthetic_well("NSY", 1000, Relation::NoisyLinear { sigma: 0.0125 }, 10).unwrap()]).unwrap();
    let plan = BenchPlan { seed: 10, ..BenchPlan::default() };
    let run = run_benchmark(&noisy, &plan, &all_models(), 10, NormalizeMode::Strict).map_err(|e| e.to_string())?;
    let summary = summarize(&run.records).map_err(|e| e.to_string())?;
    let mut parts = Vec::new();
    for &size in &plan.gap_sizes {
        let best = summary
            .iter()
            .filter(|r| r.gap_size == size)
            .min_by(|a, b| a.median.total_cmp(&b.median))
            .ok_or("no summary rows")?;
        ensure((0.005..=0.02).contains(&best.median), || {
            format!("size {size}: best median {} ({})", best.median, best.model)
        })?;
        parts.push(format!("{size}: {} {:.4}", best.model, best.median));
    }
    Ok(format!("best median MAE per size [{}]", parts.join(", ")))
}

fn c11_leakage() -> Outcome {
    let dataset = wellgap::commands::load_inputs(&[bundled_well()], -999.25).map_err(|e| e.to_string())?.0;
    let plan = BenchPlan { seed: 11, ..BenchPlan::default() };
    let mut fast: Vec<ModelConfig> = all_models();
    for c in &mut fast {
        match c.kind() {
            ModelKind::Rf => c.set("n_trees", "3").unwrap(),
            ModelKind::Ann => c.set("epochs", "2").unwrap(),
            _ => {}
        }
    }
    let run = run_benchmark(&dataset, &plan, &fast, 11, NormalizeMode::Strict).map_err(|e| e.to_string())?;
    ensure(run.leakage_checks == 450, || format!("{} cells checked by the harness", run.leakage_checks))?;

    // independent recheck of every cell
    let well = dataset.wells()[0].clone();
    let trials = generate_trials(&well, &plan).map_err(|e| e.to_string())?;
    let mut checked = 0;
    for r in &run.records {
        let trial = trials
            .iter()
            .find(|t| t.gap_size == r.gap_size && t.trial_id == r.trial_id)
            .ok_or("record without trial")?;
        ensure(trial.start_index == r.start_index, || "start index mismatch".into())?;
        let split = make_split(&well, trial, &plan).map_err(|e| e.to_string())?;
        let masked: BTreeSet<usize> = (r.start_index..r.start_index + r.gap_size).collect();
        let train: BTreeSet<usize> = split.train.indices.iter().copied().collect();
        ensure(masked.intersection(&train).next().is_none(), || format!("cell {r:?} leaks"))?;
        ensure(train.len() + masked.len() == well.len(), || "split is not a partition".into())?;
        checked += 1;
    }

    // the guard must trip on a tampered split
    let mut tampered = make_split(&well, &trials[0], &plan).map_err(|e| e.to_string())?;
    tampered.train.indices.push(trials[0].start_index);
    ensure(check_leakage(&tampered, &trials[0]).is_err(), || "guard accepted an overlapping split".into())?;
    Ok(format!("{checked} cells disjoint; guard rejects a tampered split"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 11] = [
        ("gap census oracle", c1_gap_census),
        ("threshold semantics", c2_threshold_semantics),
        ("OLS correctness", c3_ols),
        ("BRR limit", c4_brr_limit),
        ("RANSAC robustness", c5_ransac),
        ("RF sanity", c6_random_forest),
        ("MLP gradients and convergence", c7_mlp),
        ("protocol reproduction", c8_protocol),
        ("planted-relationship separation", c9_planted_relationships),
        ("MAE magnitude band", c10_mae_band),
        ("leakage guard", c11_leakage),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let label = format!("{:>2} {name}", i + 1);
        if !filter.is_empty() && !filter.iter().any(|f| label.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {label} ({secs:.1} s): {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {label} ({secs:.1} s): {why}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
