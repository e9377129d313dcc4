//! Synthetic-gap protocol: choose a complete well, draw seeded gap positions
//! for each gap size, and split the well into training rows and masked rows.

use std::io::Write;

use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{Error, Result};
use crate::gaps::{detect_gaps, DEFAULT_THRESHOLD};
use crate::ingest::{Curve, Dataset, WellLog};
use crate::seed::{derive_seed, rng};

/// Gap sizes in points for the first, second and third quartile of the
/// observed gap lengths at 0.1 m sampling.
pub const DEFAULT_GAP_SIZES: [usize; 3] = [16, 66, 168];
pub const DEFAULT_TRIALS_PER_SIZE: usize = 30;
pub const DEFAULT_FEATURES: [Curve; 4] = [Curve::Depth, Curve::Rhob, Curve::Dt, Curve::Gr];

#[derive(Debug, Clone, PartialEq)]
pub struct BenchPlan {
    /// Well to benchmark on; `None` picks the longest gapless well.
    pub well_id: Option<String>,
    pub gap_sizes: Vec<usize>,
    pub trials_per_size: usize,
    pub target: Curve,
    pub features: Vec<Curve>,
    pub seed: u64,
}

impl Default for BenchPlan {
    fn default() -> Self {
        BenchPlan {
            well_id: None,
            gap_sizes: DEFAULT_GAP_SIZES.to_vec(),
            trials_per_size: DEFAULT_TRIALS_PER_SIZE,
            target: Curve::Nphi,
            features: DEFAULT_FEATURES.to_vec(),
            seed: 0,
        }
    }
}

impl BenchPlan {
    /// Checks the plan on its own and against a well of `well_len` rows.
    pub fn validate(&self, well_len: usize) -> Result<()> {
        if self.gap_sizes.is_empty() {
            return Err(Error::Parameter("plan has no gap sizes".into()));
        }
        if self.trials_per_size == 0 {
            return Err(Error::Parameter("trials per size must be >= 1".into()));
        }
        if let Some(&bad) = self.gap_sizes.iter().find(|&&s| s == 0 || s >= well_len) {
            return Err(Error::Parameter(format!(
                "gap size {bad} must be in 1..{well_len} for a well of {well_len} rows"
            )));
        }
        if self.features.is_empty() {
            return Err(Error::Parameter("plan has no feature curves".into()));
        }
        if self.features.contains(&self.target) {
            return Err(Error::Parameter(format!(
                "target `{}` is also listed as a feature",
                self.target
            )));
        }
        Ok(())
    }
}

/// Picks the well to benchmark on. A named well must be gapless; otherwise the
/// longest gapless well wins, ties going to the smallest id.
pub fn select_complete_well<'a>(dataset: &'a Dataset, name: Option<&str>) -> Result<&'a WellLog> {
    if dataset.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(name) = name {
        let well = dataset
            .well(name)
            .ok_or_else(|| Error::UnknownWell(name.to_string()))?;
        let gaps = detect_gaps(well, DEFAULT_THRESHOLD)?.len();
        if gaps > 0 {
            return Err(Error::IneligibleWell {
                well: name.to_string(),
                gaps,
            });
        }
        return Ok(well);
    }
    let mut best: Option<&WellLog> = None;
    // wells are sorted by id, so keeping the first maximum gives the tie-break
    for well in dataset.wells() {
        if !detect_gaps(well, DEFAULT_THRESHOLD)?.is_empty() {
            continue;
        }
        if best.is_none_or(|b| well.len() > b.len()) {
            best = Some(well);
        }
    }
    best.ok_or(Error::NoCandidate)
}

/// One synthetic gap: a masked run of rows and the values it hides.
#[derive(Debug, Clone, PartialEq)]
pub struct GapTrial {
    /// Index within its gap size, `0..trials_per_size`.
    pub trial_id: usize,
    pub gap_size: usize,
    pub start_index: usize,
    /// Seed the start index was drawn from.
    pub seed: u64,
    pub truth: Vec<f64>,
}

impl GapTrial {
    pub fn masked(&self) -> std::ops::Range<usize> {
        self.start_index..self.start_index + self.gap_size
    }
}

/// Seed of a single trial. Each trial can be regenerated in isolation.
pub fn trial_seed(plan_seed: u64, gap_size: usize, trial_id: usize) -> u64 {
    derive_seed(plan_seed, &[gap_size as u64, trial_id as u64])
}

/// Draws `trials_per_size` start positions per gap size, uniformly over
/// `0..=N - gap_size`. Trials of one size may overlap.
pub fn generate_trials(well: &WellLog, plan: &BenchPlan) -> Result<Vec<GapTrial>> {
    let n = well.len();
    plan.validate(n)?;
    let target = well.curve(plan.target);
    let mut trials = Vec::with_capacity(plan.gap_sizes.len() * plan.trials_per_size);
    for &gap_size in &plan.gap_sizes {
        for trial_id in 0..plan.trials_per_size {
            let seed = trial_seed(plan.seed, gap_size, trial_id);
            let start_index = rng(seed).random_range(0..=n - gap_size);
            trials.push(GapTrial {
                trial_id,
                gap_size,
                start_index,
                seed,
                truth: target[start_index..start_index + gap_size].to_vec(),
            });
        }
    }
    Ok(trials)
}

/// Trial audit CSV: `trial_id, gap_size, start_index, seed`.
pub fn write_trials_csv<W: Write>(trials: &[GapTrial], sink: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["trial_id", "gap_size", "start_index", "seed"])?;
    for t in trials {
        w.write_record([
            t.trial_id.to_string(),
            t.gap_size.to_string(),
            t.start_index.to_string(),
            t.seed.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<trial sink>", e))?;
    Ok(())
}

/// Inputs a model may see during training.
#[derive(Debug, Clone)]
pub struct TrainSet {
    pub indices: Vec<usize>,
    pub features: DMatrix<f64>,
    pub targets: Vec<f64>,
}

/// Feature rows of the masked interval. Carries no target values.
#[derive(Debug, Clone)]
pub struct TestInputs {
    pub indices: Vec<usize>,
    pub features: DMatrix<f64>,
}

/// Held-out target values of a masked interval. Only scoring and trace
/// output read them.
#[derive(Debug, Clone, PartialEq)]
pub struct HeldOutTruth(Vec<f64>);

impl HeldOutTruth {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct TrainTestSplit {
    /// Feature columns actually used, in plan order.
    pub features: Vec<Curve>,
    /// Plan features dropped because they are constant over the well.
    pub dropped: Vec<Curve>,
    pub train: TrainSet,
    pub test: TestInputs,
    pub truth: HeldOutTruth,
}

/// Plan features that vary within the well, and those that do not.
pub fn usable_features(well: &WellLog, requested: &[Curve]) -> (Vec<Curve>, Vec<Curve>) {
    requested.iter().partition(|&&c| {
        let first = c.value(&well.records()[0]);
        well.records().iter().any(|r| c.value(r) != first)
    })
}

pub(crate) fn feature_matrix(well: &WellLog, rows: &[usize], curves: &[Curve]) -> DMatrix<f64> {
    let records = well.records();
    DMatrix::from_fn(rows.len(), curves.len(), |i, j| curves[j].value(&records[rows[i]]))
}

/// Masked rows become the test set; all other rows train. Constant feature
/// columns are dropped.
pub fn make_split(well: &WellLog, trial: &GapTrial, plan: &BenchPlan) -> Result<TrainTestSplit> {
    let n = well.len();
    if trial.gap_size == 0 || trial.start_index + trial.gap_size > n {
        return Err(Error::Parameter(format!(
            "trial [{}, {}) does not fit a well of {n} rows",
            trial.start_index,
            trial.start_index + trial.gap_size
        )));
    }
    let (features, dropped) = usable_features(well, &plan.features);
    if features.is_empty() {
        return Err(Error::DegenerateFeatures);
    }
    let masked = trial.masked();
    let train_idx: Vec<usize> = (0..n).filter(|i| !masked.contains(i)).collect();
    let test_idx: Vec<usize> = masked.collect();
    let records = well.records();
    let train = TrainSet {
        features: feature_matrix(well, &train_idx, &features),
        targets: train_idx.iter().map(|&i| plan.target.value(&records[i])).collect(),
        indices: train_idx,
    };
    let truth = HeldOutTruth(test_idx.iter().map(|&i| plan.target.value(&records[i])).collect());
    let test = TestInputs {
        features: feature_matrix(well, &test_idx, &features),
        indices: test_idx,
    };
    Ok(TrainTestSplit {
        features,
        dropped,
        train,
        test,
        truth,
    })
}
