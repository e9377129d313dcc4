use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::linalg::lstsq;
use super::{check_fit_input, Predictor};
use crate::error::{Error, Result};

/// Ordinary least squares with an intercept.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OlsState {
    pub weights: Vec<f64>,
    pub intercept: f64,
    /// Numerical rank of the centered design matrix.
    pub rank: usize,
}

impl OlsState {
    pub fn is_rank_deficient(&self) -> bool {
        self.rank < self.weights.len()
    }
}

pub(crate) fn column_means(x: &DMatrix<f64>) -> DVector<f64> {
    DVector::from_fn(x.ncols(), |j, _| x.column(j).mean())
}

pub(crate) fn centered(x: &DMatrix<f64>, means: &DVector<f64>) -> DMatrix<f64> {
    let mut xc = x.clone();
    for (j, mut col) in xc.column_iter_mut().enumerate() {
        col.add_scalar_mut(-means[j]);
    }
    xc
}

/// Fits on centered data so the intercept never competes with the weights;
/// a rank-deficient design yields the minimum-norm weights.
pub fn ols_fit(x: &DMatrix<f64>, y: &[f64]) -> Result<OlsState> {
    check_fit_input("OLS", x, y, x.ncols() + 1)?;
    let means = column_means(x);
    let y_mean = y.iter().sum::<f64>() / y.len() as f64;
    let xc = centered(x, &means);
    let yc = DVector::from_iterator(y.len(), y.iter().map(|v| v - y_mean));
    let sol = lstsq(&xc, &yc);
    let intercept = y_mean - means.dot(&sol.x);
    if !intercept.is_finite() || sol.x.iter().any(|w| !w.is_finite()) {
        return Err(Error::NumericInstability("OLS produced non-finite weights".into()));
    }
    Ok(OlsState {
        weights: sol.x.iter().copied().collect(),
        intercept,
        rank: sol.rank,
    })
}

impl Predictor for OlsState {
    fn n_features(&self) -> usize {
        self.weights.len()
    }

    fn predict_unchecked(&self, x: &DMatrix<f64>) -> Vec<f64> {
        x.row_iter()
            .map(|row| {
                self.intercept
                    + row
                        .iter()
                        .zip(&self.weights)
                        .map(|(a, w)| a * w)
                        .sum::<f64>()
            })
            .collect()
    }
}
