//! Run configuration as `key=value` lines.
//!
//! ```text
//! # benchmark on one well
//! well=F02-02
//! sizes=16,66,168
//! trials=30
//! seed=7
//! target=nphi
//! features=depth,rhob,dt,gr
//! models=ols,rf
//! model.rf.n_trees=50
//! ```
//!
//! Every command writes [`RunConfig::to_key_values`] beside its outputs;
//! feeding that file back through `--config` reproduces the run.

use std::collections::BTreeMap;
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::gaps::DEFAULT_THRESHOLD;
use crate::ingest::{Curve, NormalizeMode, DEFAULT_SENTINEL};
use crate::regress::{ModelConfig, ModelKind};
use crate::synth::BenchPlan;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub inputs: Vec<PathBuf>,
    pub out_dir: PathBuf,
    pub seed: u64,
    pub mode: NormalizeMode,
    pub threshold: f64,
    /// Bins per gap-length histogram.
    pub bins: usize,
    /// Null marker for CSV and LAS inputs (a LAS `NULL` entry wins).
    pub sentinel: f64,
    /// Model used by the fill command.
    pub fill_model: ModelKind,
    /// Seed lives in `seed`; `plan.seed` is kept equal to it.
    pub plan: BenchPlan,
    /// Enabled models, in the order given.
    pub models: Vec<ModelKind>,
    /// Hyperparameters for every model family, enabled or not.
    pub model_params: BTreeMap<ModelKind, ModelConfig>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            inputs: Vec::new(),
            out_dir: PathBuf::from("out"),
            seed: 0,
            mode: NormalizeMode::Strict,
            threshold: DEFAULT_THRESHOLD,
            bins: 30,
            sentinel: DEFAULT_SENTINEL,
            fill_model: ModelKind::Ols,
            plan: BenchPlan::default(),
            models: ModelKind::ALL.to_vec(),
            model_params: ModelKind::ALL
                .into_iter()
                .map(|k| (k, ModelConfig::default_for(k)))
                .collect(),
        }
    }
}

fn list<T>(value: &str, parse: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(parse)
        .collect()
}

fn number<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("bad value `{value}` for `{key}`")))
}

pub fn parse_models(value: &str) -> Result<Vec<ModelKind>> {
    let models = list(value, str::parse)?;
    if models.is_empty() {
        return Err(Error::Parameter("no models enabled".into()));
    }
    Ok(models)
}

pub fn parse_sizes(value: &str) -> Result<Vec<usize>> {
    list(value, |s| number("sizes", s))
}

impl RunConfig {
    /// Applies one `key=value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key.trim() {
            "inputs" => self.inputs = list(value, |s| Ok(PathBuf::from(s)))?,
            "out" => self.out_dir = PathBuf::from(value),
            "seed" => {
                self.seed = number(key, value)?;
                self.plan.seed = self.seed;
            }
            "mode" => {
                self.mode = match value {
                    "strict" => NormalizeMode::Strict,
                    "lenient" => NormalizeMode::Lenient,
                    _ => return Err(Error::Config(format!("mode must be strict or lenient, got `{value}`"))),
                }
            }
            "threshold" => self.threshold = number(key, value)?,
            "bins" => self.bins = number(key, value)?,
            "sentinel" => self.sentinel = number(key, value)?,
            "fill_model" => self.fill_model = value.parse()?,
            "well" => self.plan.well_id = (!value.is_empty()).then(|| value.to_string()),
            "sizes" => self.plan.gap_sizes = parse_sizes(value)?,
            "trials" => self.plan.trials_per_size = number(key, value)?,
            "target" => self.plan.target = value.parse()?,
            "features" => self.plan.features = list(value, |s| s.parse::<Curve>())?,
            "models" => self.models = parse_models(value)?,
            other => {
                let Some(rest) = other.strip_prefix("model.") else {
                    return Err(Error::Config(format!("unknown key `{other}`")));
                };
                let (name, param) = rest
                    .split_once('.')
                    .ok_or_else(|| Error::Config(format!("expected model.<name>.<param>, got `{other}`")))?;
                let kind: ModelKind = name.parse().map_err(|_| Error::Config(format!("unknown model `{name}`")))?;
                self.model_params
                    .entry(kind)
                    .or_insert_with(|| ModelConfig::default_for(kind))
                    .set(param, value)?;
            }
        }
        Ok(())
    }

    /// Reads `key=value` lines over the current values. Blank lines and `#`
    /// comments are skipped.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key=value", n + 1)))?;
            self.set(key, value)?;
        }
        Ok(())
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut c = RunConfig::default();
        c.apply_text(text)?;
        Ok(c)
    }

    /// Configured models that are enabled, in enable-list order.
    pub fn enabled_models(&self) -> Vec<ModelConfig> {
        self.models
            .iter()
            .map(|k| self.model_params.get(k).cloned().unwrap_or_else(|| ModelConfig::default_for(*k)))
            .collect()
    }

    pub fn model_config(&self, kind: ModelKind) -> ModelConfig {
        self.model_params.get(&kind).cloned().unwrap_or_else(|| ModelConfig::default_for(kind))
    }

    /// Effective settings, one `key=value` per entry.
    pub fn lines(&self) -> Vec<String> {
        let join = |v: Vec<String>| v.join(",");
        let mut out = vec![
            format!("inputs={}", join(self.inputs.iter().map(|p| p.display().to_string()).collect())),
            format!("out={}", self.out_dir.display()),
            format!("seed={}", self.seed),
            format!(
                "mode={}",
                match self.mode {
                    NormalizeMode::Strict => "strict",
                    NormalizeMode::Lenient => "lenient",
                }
            ),
            format!("threshold={}", self.threshold),
            format!("bins={}", self.bins),
            format!("sentinel={}", self.sentinel),
            format!("fill_model={}", self.fill_model.key()),
            format!("well={}", self.plan.well_id.as_deref().unwrap_or("")),
            format!("sizes={}", join(self.plan.gap_sizes.iter().map(ToString::to_string).collect())),
            format!("trials={}", self.plan.trials_per_size),
            format!("target={}", self.plan.target.key()),
            format!("features={}", join(self.plan.features.iter().map(|c| c.key().to_string()).collect())),
            format!("models={}", join(self.models.iter().map(|m| m.key().to_string()).collect())),
        ];
        for kind in ModelKind::ALL {
            for (param, value) in self.model_config(kind).params() {
                out.push(format!("model.{}.{param}={value}", kind.key()));
            }
        }
        out
    }

    pub fn to_key_values(&self) -> String {
        let mut s = self.lines().join("\n");
        s.push('\n');
        s
    }
}
