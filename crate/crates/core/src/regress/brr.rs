//! Bayesian ridge regression with evidence maximization of the noise
//! precision `alpha` and the weight precision `lambda`, both under Gamma
//! priors.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::ols::{centered, column_means};
use super::{check_fit_input, Predictor};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BrrParams {
    /// Gamma shape for both precisions.
    pub prior_a: f64,
    /// Gamma rate for both precisions.
    pub prior_b: f64,
    pub max_iter: usize,
    /// Stop once no weight moves by this much between iterations.
    pub tol: f64,
    /// Starting noise precision; `None` means `1 / var(y)`.
    pub alpha_init: Option<f64>,
    pub lambda_init: f64,
}

impl Default for BrrParams {
    fn default() -> Self {
        BrrParams {
            prior_a: 1e-6,
            prior_b: 1e-6,
            max_iter: 300,
            tol: 1e-3,
            alpha_init: None,
            lambda_init: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BrrState {
    /// Posterior mean of the weights.
    pub weights: Vec<f64>,
    pub intercept: f64,
    pub alpha: f64,
    pub lambda: f64,
    pub iterations_run: usize,
}

/// Posterior mean `alpha * (lambda I + alpha X^T X)^{-1} X^T y`, evaluated in
/// the eigenbasis of `X^T X`.
fn posterior_mean(
    vecs: &DMatrix<f64>,
    eig: &[f64],
    vt_xty: &DVector<f64>,
    alpha: f64,
    lambda: f64,
) -> DVector<f64> {
    let scaled = DVector::from_fn(eig.len(), |i, _| alpha / (lambda + alpha * eig[i]) * vt_xty[i]);
    vecs * scaled
}

pub fn brr_fit(x: &DMatrix<f64>, y: &[f64], params: &BrrParams) -> Result<BrrState> {
    check_fit_input("BRR", x, y, 2)?;
    if params.max_iter == 0 {
        return Err(Error::Parameter("BRR max_iter must be >= 1".into()));
    }
    let n = y.len() as f64;
    let means = column_means(x);
    let y_mean = y.iter().sum::<f64>() / n;
    let xc = centered(x, &means);
    let yc = DVector::from_iterator(y.len(), y.iter().map(|v| v - y_mean));

    let gram = xc.transpose() * &xc;
    let eigen = SymmetricEigen::new(gram);
    let eig: Vec<f64> = eigen.eigenvalues.iter().map(|&e| e.max(0.0)).collect();
    let vecs = eigen.eigenvectors;
    let vt_xty = vecs.transpose() * (xc.transpose() * &yc);

    let var_y = yc.norm_squared() / n;
    let (a, b) = (params.prior_a, params.prior_b);
    let mut alpha = params.alpha_init.unwrap_or(1.0 / (var_y + f64::EPSILON));
    let mut lambda = params.lambda_init;
    let mut previous: Option<DVector<f64>> = None;
    let mut iterations_run = 0;

    for iter in 0..params.max_iter {
        iterations_run = iter + 1;
        let coef = posterior_mean(&vecs, &eig, &vt_xty, alpha, lambda);
        let sse = (&yc - &xc * &coef).norm_squared();
        let gamma: f64 = eig.iter().map(|&e| alpha * e / (lambda + alpha * e)).sum();
        lambda = (gamma + 2.0 * a) / (coef.norm_squared() + 2.0 * b);
        alpha = (n - gamma + 2.0 * a) / (sse + 2.0 * b);
        if !(alpha.is_finite() && lambda.is_finite() && alpha > 0.0 && lambda > 0.0) {
            return Err(Error::NumericInstability(format!(
                "BRR precisions left the positive reals at iteration {iterations_run} (alpha={alpha}, lambda={lambda})"
            )));
        }
        let converged = previous
            .as_ref()
            .is_some_and(|p| (p - &coef).amax() < params.tol);
        if converged {
            break;
        }
        previous = Some(coef);
    }

    let coef = posterior_mean(&vecs, &eig, &vt_xty, alpha, lambda);
    if coef.iter().any(|w| !w.is_finite()) {
        return Err(Error::NumericInstability("BRR weights are not finite".into()));
    }
    Ok(BrrState {
        intercept: y_mean - means.dot(&coef),
        weights: coef.iter().copied().collect(),
        alpha,
        lambda,
        iterations_run,
    })
}

impl Predictor for BrrState {
    fn n_features(&self) -> usize {
        self.weights.len()
    }

    fn predict_unchecked(&self, x: &DMatrix<f64>) -> Vec<f64> {
        x.row_iter()
            .map(|row| self.intercept + row.iter().zip(&self.weights).map(|(a, w)| a * w).sum::<f64>())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regress::ols::ols_fit;

    fn linear_data(n: usize) -> (DMatrix<f64>, Vec<f64>) {
        let x = DMatrix::from_fn(n, 3, |i, j| ((i * 7 + j * 13) as f64 * 0.37).sin());
        let y = (0..n)
            .map(|i| 0.4 + 1.5 * x[(i, 0)] - 0.7 * x[(i, 1)] + 0.25 * x[(i, 2)])
            .collect();
        (x, y)
    }

    #[test]
    fn noise_free_data_approaches_ols() {
        let (x, y) = linear_data(200);
        let brr = brr_fit(&x, &y, &BrrParams::default()).unwrap();
        let ols = ols_fit(&x, &y).unwrap();
        for (b, o) in brr.weights.iter().zip(&ols.weights) {
            assert!((b - o).abs() < 1e-3, "{b} vs {o}");
        }
        assert!(brr.alpha > 0.0 && brr.lambda > 0.0);
        assert!(brr.iterations_run <= 300);
    }

    #[test]
    fn zero_target_gives_zero_model() {
        let (x, _) = linear_data(20);
        let s = brr_fit(&x, &[0.0; 20], &BrrParams::default()).unwrap();
        assert!(s.weights.iter().all(|&w| w == 0.0));
        assert_eq!(s.intercept, 0.0);
    }

    #[test]
    fn single_row_is_insufficient() {
        let x = DMatrix::from_element(1, 1, 1.0);
        assert!(matches!(brr_fit(&x, &[1.0], &BrrParams::default()), Err(Error::InsufficientData { .. })));
    }
}
