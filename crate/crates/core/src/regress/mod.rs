//! Regression backends behind one fit/predict contract.
//!
//! | name   | estimator                                   |
//! |--------|---------------------------------------------|
//! | OLS    | least squares with intercept                |
//! | BRR    | Bayesian ridge, evidence-maximized priors   |
//! | RANSAC | random sample consensus around OLS          |
//! | RF     | bootstrap forest of CART regression trees   |
//! | ANN    | one hidden ReLU layer trained with Adam     |
//!
//! Each backend exposes a free `*_fit` function returning a state that
//! implements [`Predictor`]. [`Model`] wraps a [`ModelConfig`] and a seed into
//! the stateful [`Regressor`] interface used by the benchmark.

pub mod brr;
pub mod forest;
pub mod linalg;
pub mod mlp;
pub mod ols;
pub mod ransac;

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use self::brr::{brr_fit, BrrParams, BrrState};
pub use self::forest::{fit_tree, rf_fit, ForestParams, ForestState, Node, Tree};
pub use self::mlp::{mlp_fit, MlpParams, MlpState};
pub use self::ols::{ols_fit, OlsState};
pub use self::ransac::{ransac_fit, RansacParams, RansacState};

/// A fitted model.
pub trait Predictor {
    fn n_features(&self) -> usize;

    /// Predictions for rows of `x`; the column count is assumed correct.
    fn predict_unchecked(&self, x: &DMatrix<f64>) -> Vec<f64>;

    fn predict(&self, x: &DMatrix<f64>) -> Result<Vec<f64>> {
        if x.ncols() != self.n_features() {
            return Err(Error::Shape {
                expected: self.n_features(),
                got: x.ncols(),
            });
        }
        Ok(self.predict_unchecked(x))
    }
}

/// A model that can be trained and then queried.
pub trait Regressor {
    fn name(&self) -> &str;
    fn fit(&mut self, x: &DMatrix<f64>, y: &[f64]) -> Result<()>;
    fn predict(&self, x: &DMatrix<f64>) -> Result<Vec<f64>>;
}

pub(crate) fn check_fit_input(model: &'static str, x: &DMatrix<f64>, y: &[f64], needed: usize) -> Result<()> {
    if x.nrows() != y.len() {
        return Err(Error::Shape {
            expected: x.nrows(),
            got: y.len(),
        });
    }
    if x.ncols() == 0 {
        return Err(Error::DegenerateFeatures);
    }
    if y.len() < needed {
        return Err(Error::InsufficientData {
            model,
            needed,
            got: y.len(),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ModelKind {
    Ols,
    Brr,
    Ransac,
    Rf,
    Ann,
}

impl ModelKind {
    pub const ALL: [ModelKind; 5] = [
        ModelKind::Ols,
        ModelKind::Brr,
        ModelKind::Ransac,
        ModelKind::Rf,
        ModelKind::Ann,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Ols => "OLS",
            ModelKind::Brr => "BRR",
            ModelKind::Ransac => "RANSAC",
            ModelKind::Rf => "RF",
            ModelKind::Ann => "ANN",
        }
    }

    /// Lowercase key used in config files.
    pub fn key(self) -> &'static str {
        match self {
            ModelKind::Ols => "ols",
            ModelKind::Brr => "brr",
            ModelKind::Ransac => "ransac",
            ModelKind::Rf => "rf",
            ModelKind::Ann => "ann",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        ModelKind::ALL
            .into_iter()
            .find(|k| k.key() == lower)
            .ok_or_else(|| Error::Parameter(format!("unknown model `{s}`")))
    }
}

/// Model family plus its hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ModelConfig {
    Ols,
    Brr(BrrParams),
    Ransac(RansacParams),
    Rf(ForestParams),
    Ann(MlpParams),
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("bad value `{value}` for `{key}`")))
}

fn parse_optional<T: FromStr>(key: &str, value: &str) -> Result<Option<T>> {
    match value.trim().to_ascii_lowercase().as_str() {
        "none" | "auto" | "" => Ok(None),
        _ => parse_value(key, value).map(Some),
    }
}

fn show_optional<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(|| "none".to_string(), T::to_string)
}

impl ModelConfig {
    pub fn default_for(kind: ModelKind) -> Self {
        match kind {
            ModelKind::Ols => ModelConfig::Ols,
            ModelKind::Brr => ModelConfig::Brr(BrrParams::default()),
            ModelKind::Ransac => ModelConfig::Ransac(RansacParams::default()),
            ModelKind::Rf => ModelConfig::Rf(ForestParams::default()),
            ModelKind::Ann => ModelConfig::Ann(MlpParams::default()),
        }
    }

    pub fn kind(&self) -> ModelKind {
        match self {
            ModelConfig::Ols => ModelKind::Ols,
            ModelConfig::Brr(_) => ModelKind::Brr,
            ModelConfig::Ransac(_) => ModelKind::Ransac,
            ModelConfig::Rf(_) => ModelKind::Rf,
            ModelConfig::Ann(_) => ModelKind::Ann,
        }
    }

    /// Sets one hyperparameter by name. `none`/`auto` clear optional ones.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let kind = self.kind();
        let unknown = || Error::Config(format!("unknown parameter `{key}` for {kind}"));
        match self {
            ModelConfig::Ols => return Err(unknown()),
            ModelConfig::Brr(p) => match key {
                "prior_a" => p.prior_a = parse_value(key, value)?,
                "prior_b" => p.prior_b = parse_value(key, value)?,
                "max_iter" => p.max_iter = parse_value(key, value)?,
                "tol" => p.tol = parse_value(key, value)?,
                "alpha_init" => p.alpha_init = parse_optional(key, value)?,
                "lambda_init" => p.lambda_init = parse_value(key, value)?,
                _ => return Err(unknown()),
            },
            ModelConfig::Ransac(p) => match key {
                "min_samples" => p.min_samples = parse_optional(key, value)?,
                "residual_threshold" => p.residual_threshold = parse_optional(key, value)?,
                "max_trials" => p.max_trials = parse_value(key, value)?,
                _ => return Err(unknown()),
            },
            ModelConfig::Rf(p) => match key {
                "n_trees" => p.n_trees = parse_value(key, value)?,
                "max_depth" => p.max_depth = parse_optional(key, value)?,
                "min_samples_leaf" => p.min_samples_leaf = parse_value(key, value)?,
                "max_features" => p.max_features = parse_optional(key, value)?,
                "bootstrap" => p.bootstrap = parse_value(key, value)?,
                _ => return Err(unknown()),
            },
            ModelConfig::Ann(p) => match key {
                "hidden" => p.hidden = parse_value(key, value)?,
                "epochs" => p.epochs = parse_value(key, value)?,
                "batch_size" => p.batch_size = parse_optional(key, value)?,
                "learning_rate" => p.learning_rate = parse_value(key, value)?,
                "beta1" => p.beta1 = parse_value(key, value)?,
                "beta2" => p.beta2 = parse_value(key, value)?,
                "epsilon" => p.epsilon = parse_value(key, value)?,
                _ => return Err(unknown()),
            },
        }
        Ok(())
    }

    /// Every hyperparameter with its effective value, in a fixed order.
    pub fn params(&self) -> Vec<(&'static str, String)> {
        match self {
            ModelConfig::Ols => vec![],
            ModelConfig::Brr(p) => vec![
                ("prior_a", p.prior_a.to_string()),
                ("prior_b", p.prior_b.to_string()),
                ("max_iter", p.max_iter.to_string()),
                ("tol", p.tol.to_string()),
                ("alpha_init", show_optional(&p.alpha_init)),
                ("lambda_init", p.lambda_init.to_string()),
            ],
            ModelConfig::Ransac(p) => vec![
                ("min_samples", show_optional(&p.min_samples)),
                ("residual_threshold", show_optional(&p.residual_threshold)),
                ("max_trials", p.max_trials.to_string()),
            ],
            ModelConfig::Rf(p) => vec![
                ("n_trees", p.n_trees.to_string()),
                ("max_depth", show_optional(&p.max_depth)),
                ("min_samples_leaf", p.min_samples_leaf.to_string()),
                ("max_features", show_optional(&p.max_features)),
                ("bootstrap", p.bootstrap.to_string()),
            ],
            ModelConfig::Ann(p) => vec![
                ("hidden", p.hidden.to_string()),
                ("epochs", p.epochs.to_string()),
                ("batch_size", show_optional(&p.batch_size)),
                ("learning_rate", p.learning_rate.to_string()),
                ("beta1", p.beta1.to_string()),
                ("beta2", p.beta2.to_string()),
                ("epsilon", p.epsilon.to_string()),
            ],
        }
    }

    /// Fits the configured backend. `seed` drives every random choice.
    pub fn fit(&self, x: &DMatrix<f64>, y: &[f64], seed: u64) -> Result<FittedModel> {
        Ok(match self {
            ModelConfig::Ols => FittedModel::Ols(ols_fit(x, y)?),
            ModelConfig::Brr(p) => FittedModel::Brr(brr_fit(x, y, p)?),
            ModelConfig::Ransac(p) => FittedModel::Ransac(ransac_fit(x, y, p, seed)?),
            ModelConfig::Rf(p) => FittedModel::Rf(rf_fit(x, y, p, seed)?),
            ModelConfig::Ann(p) => FittedModel::Ann(mlp_fit(x, y, p, seed)?),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum FittedModel {
    Ols(OlsState),
    Brr(BrrState),
    Ransac(RansacState),
    Rf(ForestState),
    Ann(MlpState),
}

impl FittedModel {
    pub fn kind(&self) -> ModelKind {
        match self {
            FittedModel::Ols(_) => ModelKind::Ols,
            FittedModel::Brr(_) => ModelKind::Brr,
            FittedModel::Ransac(_) => ModelKind::Ransac,
            FittedModel::Rf(_) => ModelKind::Rf,
            FittedModel::Ann(_) => ModelKind::Ann,
        }
    }

    fn as_predictor(&self) -> &dyn Predictor {
        match self {
            FittedModel::Ols(s) => s,
            FittedModel::Brr(s) => s,
            FittedModel::Ransac(s) => s,
            FittedModel::Rf(s) => s,
            FittedModel::Ann(s) => s,
        }
    }
}

impl Predictor for FittedModel {
    fn n_features(&self) -> usize {
        self.as_predictor().n_features()
    }

    fn predict_unchecked(&self, x: &DMatrix<f64>) -> Vec<f64> {
        self.as_predictor().predict_unchecked(x)
    }
}

/// Version tag written into every saved model.
pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct SavedModel {
    format: String,
    version: u32,
    model: FittedModel,
}

const MODEL_FORMAT: &str = "wellgap-model";

/// Serializes a fitted model to versioned JSON.
pub fn save_model(model: &FittedModel) -> Result<String> {
    let saved = SavedModel {
        format: MODEL_FORMAT.into(),
        version: MODEL_FORMAT_VERSION,
        model: model.clone(),
    };
    serde_json::to_string(&saved).map_err(|e| Error::ModelFormat(e.to_string()))
}

pub fn load_model(text: &str) -> Result<FittedModel> {
    let saved: SavedModel = serde_json::from_str(text).map_err(|e| Error::ModelFormat(e.to_string()))?;
    if saved.format != MODEL_FORMAT || saved.version != MODEL_FORMAT_VERSION {
        return Err(Error::ModelFormat(format!(
            "expected {MODEL_FORMAT} v{MODEL_FORMAT_VERSION}, found {} v{}",
            saved.format, saved.version
        )));
    }
    Ok(saved.model)
}

/// A configured model that holds its fitted state once trained.
#[derive(Debug, Clone)]
pub struct Model {
    config: ModelConfig,
    seed: u64,
    state: Option<FittedModel>,
}

impl Model {
    pub fn new(config: ModelConfig, seed: u64) -> Self {
        Model {
            config,
            seed,
            state: None,
        }
    }

    pub fn config(&self) -> &ModelConfig {
        &self.config
    }

    pub fn state(&self) -> Option<&FittedModel> {
        self.state.as_ref()
    }
}

impl Regressor for Model {
    fn name(&self) -> &str {
        self.config.kind().name()
    }

    fn fit(&mut self, x: &DMatrix<f64>, y: &[f64]) -> Result<()> {
        self.state = Some(self.config.fit(x, y, self.seed)?);
        Ok(())
    }

    fn predict(&self, x: &DMatrix<f64>) -> Result<Vec<f64>> {
        let state = self.state.as_ref().ok_or(Error::Unfitted)?;
        let out = Predictor::predict(state, x)?;
        if out.iter().any(|v| !v.is_finite()) {
            return Err(Error::NumericInstability(format!("{} produced non-finite predictions", self.name())));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data() -> (DMatrix<f64>, Vec<f64>) {
        let x = DMatrix::from_fn(60, 2, |i, j| ((i * 5 + j * 11) as f64 * 0.23).sin());
        let y = (0..60).map(|i| 0.3 + 0.2 * x[(i, 0)] - 0.1 * x[(i, 1)]).collect();
        (x, y)
    }

    #[test]
    fn predict_before_fit_is_unfitted() {
        for kind in ModelKind::ALL {
            let m = Model::new(ModelConfig::default_for(kind), 0);
            assert!(matches!(m.predict(&DMatrix::zeros(1, 2)), Err(Error::Unfitted)));
        }
    }

    #[test]
    fn every_backend_fits_predicts_and_is_pure() {
        let (x, y) = data();
        for kind in ModelKind::ALL {
            let mut config = ModelConfig::default_for(kind);
            if kind == ModelKind::Rf {
                config.set("n_trees", "10").unwrap();
            }
            if kind == ModelKind::Ann {
                config.set("epochs", "20").unwrap();
            }
            let mut m = Model::new(config.clone(), 17);
            m.fit(&x, &y).unwrap();
            let a = m.predict(&x).unwrap();
            assert_eq!(a, m.predict(&x).unwrap(), "{kind}");
            assert_eq!(a.len(), 60);
            assert!(matches!(m.predict(&DMatrix::zeros(2, 3)), Err(Error::Shape { .. })));
            let mut again = Model::new(config, 17);
            again.fit(&x, &y).unwrap();
            assert_eq!(a, again.predict(&x).unwrap(), "{kind} not reproducible");
        }
    }

    #[test]
    fn config_set_and_echo() {
        let mut c = ModelConfig::default_for(ModelKind::Rf);
        c.set("max_depth", "8").unwrap();
        c.set("max_features", "none").unwrap();
        let params = c.params();
        assert!(params.contains(&("max_depth", "8".to_string())));
        assert!(params.contains(&("max_features", "none".to_string())));
        assert!(c.set("learning_rate", "1").is_err());
        assert!(c.set("n_trees", "many").is_err());
        assert!(ModelConfig::Ols.clone().set("x", "1").is_err());
    }

    #[test]
    fn kinds_parse_case_insensitively() {
        assert_eq!("Ransac".parse::<ModelKind>().unwrap(), ModelKind::Ransac);
        assert_eq!("ANN".parse::<ModelKind>().unwrap(), ModelKind::Ann);
        assert!("svm".parse::<ModelKind>().is_err());
    }

    #[test]
    fn saved_models_reload_and_predict_identically() {
        let (x, y) = data();
        for kind in ModelKind::ALL {
            let mut config = ModelConfig::default_for(kind);
            if kind == ModelKind::Rf {
                config.set("n_trees", "5").unwrap();
            }
            if kind == ModelKind::Ann {
                config.set("epochs", "3").unwrap();
            }
            let fitted = config.fit(&x, &y, 3).unwrap();
            let loaded = load_model(&save_model(&fitted).unwrap()).unwrap();
            assert_eq!(fitted.predict(&x).unwrap(), loaded.predict(&x).unwrap(), "{kind}");
        }
        assert!(load_model(r#"{"format":"wellgap-model","version":99,"model":{"Ols":{"weights":[],"intercept":0,"rank":0}}}"#).is_err());
    }
}
