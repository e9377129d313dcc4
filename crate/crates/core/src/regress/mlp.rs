//! One-hidden-layer perceptron: rectified-linear hidden units, identity
//! output, mean squared error, Adam updates on shuffled mini-batches.

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{check_fit_input, Predictor};
use crate::error::{Error, Result};
use crate::seed::rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpParams {
    pub hidden: usize,
    pub epochs: usize,
    /// `None` means `min(200, n)`.
    pub batch_size: Option<usize>,
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for MlpParams {
    fn default() -> Self {
        MlpParams {
            hidden: 100,
            epochs: 200,
            batch_size: None,
            learning_rate: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpState {
    pub n_features: usize,
    pub hidden: usize,
    /// Hidden weights, row-major `hidden x n_features`.
    pub w1: Vec<f64>,
    pub b1: Vec<f64>,
    pub w2: Vec<f64>,
    pub b2: f64,
    /// Mean training loss per epoch.
    pub loss_trace: Vec<f64>,
}

impl MlpState {
    /// Glorot-uniform weights and biases.
    pub fn init(n_features: usize, hidden: usize, seed: u64) -> Self {
        let mut r = rng(seed);
        let l1 = (6.0 / (n_features + hidden) as f64).sqrt();
        let l2 = (6.0 / (hidden + 1) as f64).sqrt();
        let mut draw = |n: usize, limit: f64| -> Vec<f64> {
            (0..n).map(|_| r.random_range(-limit..limit)).collect()
        };
        let w1 = draw(hidden * n_features, l1);
        let b1 = draw(hidden, l1);
        let w2 = draw(hidden, l2);
        let b2 = draw(1, l2)[0];
        MlpState {
            n_features,
            hidden,
            w1,
            b1,
            w2,
            b2,
            loss_trace: Vec::new(),
        }
    }

    pub fn zeros(n_features: usize, hidden: usize) -> Self {
        MlpState {
            n_features,
            hidden,
            w1: vec![0.0; hidden * n_features],
            b1: vec![0.0; hidden],
            w2: vec![0.0; hidden],
            b2: 0.0,
            loss_trace: Vec::new(),
        }
    }

    pub fn param_count(&self) -> usize {
        self.w1.len() + self.b1.len() + self.w2.len() + 1
    }

    /// Parameters flattened as `w1, b1, w2, b2`.
    pub fn params(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.param_count());
        out.extend_from_slice(&self.w1);
        out.extend_from_slice(&self.b1);
        out.extend_from_slice(&self.w2);
        out.push(self.b2);
        out
    }

    pub fn set_params(&mut self, flat: &[f64]) {
        assert_eq!(flat.len(), self.param_count());
        let (w1, rest) = flat.split_at(self.w1.len());
        let (b1, rest) = rest.split_at(self.b1.len());
        let (w2, rest) = rest.split_at(self.w2.len());
        self.w1.copy_from_slice(w1);
        self.b1.copy_from_slice(b1);
        self.w2.copy_from_slice(w2);
        self.b2 = rest[0];
    }

    fn forward_row(&self, row: &[f64], hidden: &mut [f64]) -> f64 {
        let mut out = self.b2;
        for k in 0..self.hidden {
            let w = &self.w1[k * self.n_features..(k + 1) * self.n_features];
            let z = self.b1[k] + w.iter().zip(row).map(|(a, b)| a * b).sum::<f64>();
            hidden[k] = z;
            if z > 0.0 {
                out += self.w2[k] * z;
            }
        }
        out
    }

    /// Mean squared error over `rows` (row-major, `n_features` wide) and its
    /// gradient in [`params`](Self::params) order.
    pub fn loss_and_gradient(&self, rows: &[f64], y: &[f64]) -> (f64, Vec<f64>) {
        let p = self.n_features;
        let b = y.len();
        let mut grad = vec![0.0; self.param_count()];
        let (gw1, rest) = grad.split_at_mut(self.w1.len());
        let (gb1, rest) = rest.split_at_mut(self.b1.len());
        let (gw2, gb2) = rest.split_at_mut(self.w2.len());
        let mut z = vec![0.0; self.hidden];
        let mut loss = 0.0;
        for (i, &target) in y.iter().enumerate() {
            let row = &rows[i * p..(i + 1) * p];
            let out = self.forward_row(row, &mut z);
            let err = out - target;
            loss += err * err;
            let d_out = 2.0 * err / b as f64;
            gb2[0] += d_out;
            for k in 0..self.hidden {
                if z[k] > 0.0 {
                    gw2[k] += d_out * z[k];
                    let dz = d_out * self.w2[k];
                    gb1[k] += dz;
                    for (g, &xj) in gw1[k * p..(k + 1) * p].iter_mut().zip(row) {
                        *g += dz * xj;
                    }
                }
            }
        }
        (loss / b as f64, grad)
    }

    pub fn loss(&self, x: &DMatrix<f64>, y: &[f64]) -> f64 {
        let pred = self.predict_unchecked(x);
        pred.iter().zip(y).map(|(p, t)| (p - t).powi(2)).sum::<f64>() / y.len() as f64
    }
}

pub(crate) fn row_major(x: &DMatrix<f64>) -> Vec<f64> {
    x.transpose().as_slice().to_vec()
}

pub fn mlp_fit(x: &DMatrix<f64>, y: &[f64], params: &MlpParams, seed: u64) -> Result<MlpState> {
    check_fit_input("ANN", x, y, 2)?;
    if params.hidden == 0 || params.epochs == 0 {
        return Err(Error::Parameter("ANN needs hidden >= 1 and epochs >= 1".into()));
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::NumericInstability("ANN targets must be finite".into()));
    }
    let n = y.len();
    let p = x.ncols();
    let batch = params.batch_size.unwrap_or(200).clamp(1, n);
    let rows = row_major(x);

    let mut r = rng(seed);
    let mut state = MlpState::init(p, params.hidden, r.random());
    let mut theta = state.params();
    let mut m = vec![0.0; theta.len()];
    let mut v = vec![0.0; theta.len()];
    let mut t = 0i32;
    let mut order: Vec<usize> = (0..n).collect();
    let mut batch_rows = Vec::with_capacity(batch * p);
    let mut batch_y = Vec::with_capacity(batch);

    for epoch in 0..params.epochs {
        order.shuffle(&mut r);
        let mut epoch_loss = 0.0;
        for chunk in order.chunks(batch) {
            batch_rows.clear();
            batch_y.clear();
            for &i in chunk {
                batch_rows.extend_from_slice(&rows[i * p..(i + 1) * p]);
                batch_y.push(y[i]);
            }
            state.set_params(&theta);
            let (loss, grad) = state.loss_and_gradient(&batch_rows, &batch_y);
            epoch_loss += loss * chunk.len() as f64;
            t += 1;
            let c1 = 1.0 - params.beta1.powi(t);
            let c2 = 1.0 - params.beta2.powi(t);
            for (((w, g), m), v) in theta.iter_mut().zip(&grad).zip(&mut m).zip(&mut v) {
                *m = params.beta1 * *m + (1.0 - params.beta1) * g;
                *v = params.beta2 * *v + (1.0 - params.beta2) * g * g;
                *w -= params.learning_rate * (*m / c1) / ((*v / c2).sqrt() + params.epsilon);
            }
        }
        let epoch_loss = epoch_loss / n as f64;
        if !epoch_loss.is_finite() {
            return Err(Error::NumericInstability(format!(
                "ANN loss is not finite at epoch {}",
                epoch + 1
            )));
        }
        state.loss_trace.push(epoch_loss);
    }
    state.set_params(&theta);
    if theta.iter().any(|w| !w.is_finite()) {
        return Err(Error::NumericInstability("ANN parameters are not finite".into()));
    }
    Ok(state)
}

impl Predictor for MlpState {
    fn n_features(&self) -> usize {
        self.n_features
    }

    fn predict_unchecked(&self, x: &DMatrix<f64>) -> Vec<f64> {
        let rows = row_major(x);
        let mut z = vec![0.0; self.hidden];
        rows.chunks(self.n_features.max(1))
            .take(x.nrows())
            .map(|row| self.forward_row(row, &mut z))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_network_predicts_zero() {
        let s = MlpState::zeros(3, 5);
        let x = DMatrix::from_fn(4, 3, |i, j| (i * 10 + j) as f64 - 7.0);
        assert_eq!(s.predict(&x).unwrap(), vec![0.0; 4]);
    }

    #[test]
    fn params_round_trip() {
        let mut s = MlpState::init(2, 3, 9);
        let flat = s.params();
        assert_eq!(flat.len(), 2 * 3 + 3 + 3 + 1);
        let mut shifted = flat.clone();
        shifted.iter_mut().for_each(|p| *p += 1.0);
        s.set_params(&shifted);
        assert_eq!(s.params(), shifted);
    }

    #[test]
    fn glorot_bounds() {
        let s = MlpState::init(4, 100, 1);
        let limit = (6.0f64 / 104.0).sqrt();
        assert!(s.w1.iter().all(|w| w.abs() <= limit));
        assert!(s.w1.iter().any(|w| w.abs() > limit * 0.9));
    }

    #[test]
    fn loss_trace_has_one_entry_per_epoch() {
        let x = DMatrix::from_fn(20, 1, |i, _| i as f64 / 20.0);
        let y: Vec<f64> = (0..20).map(|i| i as f64 / 40.0).collect();
        let params = MlpParams { hidden: 8, epochs: 7, ..Default::default() };
        let s = mlp_fit(&x, &y, &params, 2).unwrap();
        assert_eq!(s.loss_trace.len(), 7);
        assert!(s.loss_trace.iter().all(|l| l.is_finite()));
    }

    #[test]
    fn diverging_run_names_the_epoch() {
        let x = DMatrix::from_fn(10, 1, |i, _| i as f64 / 10.0);
        let y = vec![1e160; 10];
        let params = MlpParams { hidden: 4, epochs: 5, ..Default::default() };
        match mlp_fit(&x, &y, &params, 0) {
            Err(Error::NumericInstability(msg)) => assert!(msg.contains("epoch"), "{msg}"),
            other => panic!("expected instability, got {other:?}"),
        }
    }
}
