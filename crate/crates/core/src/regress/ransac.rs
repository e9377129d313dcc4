//! RANSAC around the least-squares estimator.

use nalgebra::DMatrix;
use rand::seq::index::sample;
use serde::{Deserialize, Serialize};

use super::ols::{ols_fit, OlsState};
use super::{check_fit_input, Predictor};
use crate::error::{Error, Result};
use crate::seed::rng;
use crate::stats::quantile_sorted;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RansacParams {
    /// Rows per hypothesis; `None` means features + 1.
    pub min_samples: Option<usize>,
    /// Inlier cutoff on absolute residuals; `None` means the median absolute
    /// deviation of the targets.
    pub residual_threshold: Option<f64>,
    pub max_trials: usize,
}

impl Default for RansacParams {
    fn default() -> Self {
        RansacParams {
            min_samples: None,
            residual_threshold: None,
            max_trials: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RansacState {
    /// Least-squares refit on the consensus set.
    pub base: OlsState,
    /// Rows within the threshold under `base`.
    pub inlier_mask: Vec<bool>,
    pub residual_threshold: f64,
    pub trials_run: usize,
}

impl RansacState {
    pub fn inlier_count(&self) -> usize {
        self.inlier_mask.iter().filter(|&&b| b).count()
    }
}

/// Median absolute deviation around the median.
pub fn median_absolute_deviation(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let median = quantile_sorted(&sorted, 0.5);
    let mut dev: Vec<f64> = values.iter().map(|v| (v - median).abs()).collect();
    dev.sort_by(f64::total_cmp);
    quantile_sorted(&dev, 0.5)
}

fn select_rows(x: &DMatrix<f64>, y: &[f64], rows: &[usize]) -> (DMatrix<f64>, Vec<f64>) {
    (x.select_rows(rows), rows.iter().map(|&i| y[i]).collect())
}

fn residuals(model: &OlsState, x: &DMatrix<f64>, y: &[f64]) -> Vec<f64> {
    model
        .predict_unchecked(x)
        .into_iter()
        .zip(y)
        .map(|(p, t)| (t - p).abs())
        .collect()
}

/// Samples `min_samples` rows without replacement per trial, fits least
/// squares, and keeps the hypothesis with the most inliers (ties: smaller
/// summed inlier residual). The winner's inliers are refit.
pub fn ransac_fit(x: &DMatrix<f64>, y: &[f64], params: &RansacParams, seed: u64) -> Result<RansacState> {
    let p = x.ncols();
    let min_samples = params.min_samples.unwrap_or(p + 1);
    if min_samples < p + 1 {
        return Err(Error::Parameter(format!(
            "RANSAC min_samples {min_samples} is below features + 1 = {}",
            p + 1
        )));
    }
    check_fit_input("RANSAC", x, y, min_samples)?;
    let threshold = params
        .residual_threshold
        .unwrap_or_else(|| median_absolute_deviation(y));
    let n = y.len();
    let mut rng = rng(seed);

    let mut best: Option<(usize, f64, Vec<usize>)> = None;
    let mut trials_run = 0;
    for _ in 0..params.max_trials {
        trials_run += 1;
        let rows = sample(&mut rng, n, min_samples).into_vec();
        let (xs, ys) = select_rows(x, y, &rows);
        let Ok(candidate) = ols_fit(&xs, &ys) else { continue };
        let res = residuals(&candidate, x, y);
        let inliers: Vec<usize> = (0..n).filter(|&i| res[i] <= threshold).collect();
        if inliers.len() < min_samples {
            continue;
        }
        let score: f64 = inliers.iter().map(|&i| res[i]).sum();
        let better = match &best {
            None => true,
            Some((count, s, _)) => inliers.len() > *count || (inliers.len() == *count && score < *s),
        };
        if better {
            best = Some((inliers.len(), score, inliers));
        }
        if best.as_ref().is_some_and(|b| b.0 == n && b.1 == 0.0) {
            break;
        }
    }

    let (_, _, consensus) = best.ok_or(Error::NoConsensus(min_samples))?;
    let (xi, yi) = select_rows(x, y, &consensus);
    let base = ols_fit(&xi, &yi)?;
    let inlier_mask: Vec<bool> = residuals(&base, x, y).iter().map(|&r| r <= threshold).collect();
    if inlier_mask.iter().filter(|&&b| b).count() < min_samples {
        return Err(Error::NoConsensus(min_samples));
    }
    Ok(RansacState {
        base,
        inlier_mask,
        residual_threshold: threshold,
        trials_run,
    })
}

impl Predictor for RansacState {
    fn n_features(&self) -> usize {
        self.base.n_features()
    }

    fn predict_unchecked(&self, x: &DMatrix<f64>) -> Vec<f64> {
        self.base.predict_unchecked(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(xs: &[f64]) -> (DMatrix<f64>, Vec<f64>) {
        (DMatrix::from_column_slice(xs.len(), 1, xs), xs.iter().map(|x| 2.0 * x + 1.0).collect())
    }

    #[test]
    fn clean_line_is_all_inliers() {
        let xs: Vec<f64> = (0..30).map(|i| i as f64 / 30.0).collect();
        let (x, y) = line(&xs);
        let s = ransac_fit(&x, &y, &RansacParams::default(), 3).unwrap();
        assert!((s.base.weights[0] - 2.0).abs() < 1e-12);
        assert!((s.base.intercept - 1.0).abs() < 1e-12);
        assert_eq!(s.inlier_count(), 30);
    }

    #[test]
    fn minimal_sample_equals_plain_ols() {
        let (x, y) = (DMatrix::from_column_slice(2, 1, &[0.0, 1.0]), vec![0.5, 2.0]);
        let s = ransac_fit(&x, &y, &RansacParams::default(), 11).unwrap();
        let ols = ols_fit(&x, &y).unwrap();
        assert_eq!(s.base, ols);
    }

    #[test]
    fn mad_of_small_set() {
        // median 4, deviations [3, 1, 1, 5] -> median 2
        assert_eq!(median_absolute_deviation(&[1.0, 3.0, 5.0, 9.0]), 2.0);
    }

    #[test]
    fn impossible_threshold_is_no_consensus() {
        let x = DMatrix::from_column_slice(6, 1, &[0.0, 1.0, 2.0, 3.0, 4.0, 5.0]);
        let y = [0.0, 5.0, 1.0, 7.0, 2.0, 9.0];
        let params = RansacParams { residual_threshold: Some(-1.0), ..Default::default() };
        assert!(matches!(ransac_fit(&x, &y, &params, 0), Err(Error::NoConsensus(2))));
    }

    #[test]
    fn same_seed_same_model() {
        let x = DMatrix::from_fn(40, 2, |i, j| ((i + 3 * j) as f64 * 0.7).sin());
        let y: Vec<f64> = (0..40).map(|i| x[(i, 0)] - x[(i, 1)] + if i % 7 == 0 { 3.0 } else { 0.01 * (i as f64).cos() }).collect();
        let a = ransac_fit(&x, &y, &RansacParams::default(), 99).unwrap();
        let b = ransac_fit(&x, &y, &RansacParams::default(), 99).unwrap();
        assert_eq!(a, b);
    }
}
