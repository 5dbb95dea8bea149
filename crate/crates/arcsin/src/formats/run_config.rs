//! Flat key=value run configuration.
//!
//! One `key = value` pair per line; blank lines and lines starting with `#`
//! are ignored. Every key has a default, so the empty file is a valid
//! config. Keys may appear in any order; unknown and duplicate keys are
//! errors, reported with their line number. Lists are comma-separated.

use crate::error::{Error, Result};
use crate::experiment::{ExperimentConfig, InjectorSpec};
use crate::injector::InjectorConfig;
use crate::probe::TrainOptions;
use crate::scenario::ScenarioConfig;
use std::fs;
use std::path::Path;

use super::atomic_write;

/// Injector families the simulation can run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InjectorKind {
    Identity,
    Gaussian,
    ArcSin,
}

impl InjectorKind {
    fn name(self) -> &'static str {
        match self {
            InjectorKind::Identity => "identity",
            InjectorKind::Gaussian => "gaussian",
            InjectorKind::ArcSin => "arcsin",
        }
    }
}

/// Every tunable of the simulation in one flat document.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    /// Which injector families to run; gaussian expands over
    /// `gaussian_scales`, one run per scale.
    pub injectors: Vec<InjectorKind>,
    pub gaussian_scales: Vec<f64>,
    pub pool_size: usize,
    pub threshold: f64,
    pub epsilon: f64,
    pub post_clamp: bool,
    pub dim: usize,
    pub num_classes: usize,
    pub train_per_class: usize,
    pub test_per_class: usize,
    pub text_noise_sigma: f64,
    pub image_noise_sigma: f64,
    pub gap_magnitude: f64,
    pub epochs: usize,
    pub learning_rate: f64,
    /// Training-set fractions for the dataset-scale sweep; empty disables it.
    pub fractions: Vec<f64>,
    /// Master seed (simulate's --seeds overrides it per run).
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let injector = InjectorConfig::default();
        let scenario = ScenarioConfig::default();
        let training = TrainOptions::default();
        RunConfig {
            injectors: vec![
                InjectorKind::Identity,
                InjectorKind::Gaussian,
                InjectorKind::ArcSin,
            ],
            gaussian_scales: vec![0.05, 0.1, 0.2],
            pool_size: injector.pool_size,
            threshold: injector.threshold,
            epsilon: injector.epsilon,
            post_clamp: injector.post_clamp,
            dim: scenario.dim,
            num_classes: scenario.num_classes,
            train_per_class: scenario.train_per_class,
            test_per_class: scenario.test_per_class,
            text_noise_sigma: scenario.text_noise_sigma,
            image_noise_sigma: scenario.image_noise_sigma,
            gap_magnitude: scenario.gap_magnitude,
            epochs: training.epochs,
            learning_rate: training.learning_rate,
            fractions: Vec::new(),
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn injector_config(&self) -> InjectorConfig {
        InjectorConfig {
            pool_size: self.pool_size,
            threshold: self.threshold,
            epsilon: self.epsilon,
            post_clamp: self.post_clamp,
            seed: self.seed,
        }
    }

    pub fn scenario_config(&self) -> ScenarioConfig {
        ScenarioConfig {
            dim: self.dim,
            num_classes: self.num_classes,
            train_per_class: self.train_per_class,
            test_per_class: self.test_per_class,
            text_noise_sigma: self.text_noise_sigma,
            image_noise_sigma: self.image_noise_sigma,
            gap_magnitude: self.gap_magnitude,
            seed: self.seed,
        }
    }

    pub fn train_options(&self) -> TrainOptions {
        TrainOptions {
            epochs: self.epochs,
            learning_rate: self.learning_rate,
        }
    }

    /// Expand the injector families into concrete specs, in config order.
    pub fn injector_specs(&self) -> Vec<InjectorSpec> {
        let mut specs = Vec::new();
        for kind in &self.injectors {
            match kind {
                InjectorKind::Identity => specs.push(InjectorSpec::Identity),
                InjectorKind::Gaussian => {
                    for &scale in &self.gaussian_scales {
                        specs.push(InjectorSpec::FixedGaussian { scale });
                    }
                }
                InjectorKind::ArcSin => specs.push(InjectorSpec::ArcSin {
                    config: self.injector_config(),
                }),
            }
        }
        specs
    }

    pub fn experiment_config(&self, master_seed: u64) -> ExperimentConfig {
        ExperimentConfig {
            scenario: self.scenario_config(),
            injectors: self.injector_specs(),
            training: self.train_options(),
            master_seed,
        }
    }
}

fn parse_list<T, F>(raw: &str, mut item: F) -> std::result::Result<Vec<T>, String>
where
    F: FnMut(&str) -> std::result::Result<T, String>,
{
    let raw = raw.trim();
    if raw.is_empty() {
        return Ok(Vec::new());
    }
    raw.split(',').map(|part| item(part.trim())).collect()
}

fn expect<T: std::str::FromStr>(raw: &str, what: &str) -> std::result::Result<T, String> {
    raw.parse::<T>()
        .map_err(|_| format!("'{raw}' is not a valid {what}"))
}

pub fn parse_config_str(text: &str) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    let mut seen: Vec<&str> = Vec::new();

    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::ConfigParse {
            line: line_no,
            message: format!("expected 'key = value', got '{line}'"),
        })?;
        let key = key.trim();
        let value = value.trim();
        let fail = |message: String| Error::ConfigParse {
            line: line_no,
            message: format!("key '{key}': {message}"),
        };

        let apply = |cfg: &mut RunConfig| -> std::result::Result<&'static str, String> {
            match key {
                "injectors" => {
                    cfg.injectors = parse_list(value, |s| match s {
                        "identity" => Ok(InjectorKind::Identity),
                        "gaussian" => Ok(InjectorKind::Gaussian),
                        "arcsin" => Ok(InjectorKind::ArcSin),
                        other => Err(format!(
                            "unknown injector '{other}' (expected identity, gaussian, or arcsin)"
                        )),
                    })?;
                    Ok("injectors")
                }
                "gaussian_scales" => {
                    cfg.gaussian_scales = parse_list(value, |s| {
                        let v: f64 = expect(s, "number")?;
                        if v < 0.0 {
                            return Err(format!("scale {v} must be non-negative"));
                        }
                        Ok(v)
                    })?;
                    Ok("gaussian_scales")
                }
                "pool_size" => {
                    let v: usize = expect(value, "positive integer")?;
                    if v == 0 {
                        return Err("must be at least 1".to_string());
                    }
                    cfg.pool_size = v;
                    Ok("pool_size")
                }
                "threshold" => {
                    let v: f64 = expect(value, "number")?;
                    if !(v > 0.0 && v < 1.0) {
                        return Err(format!("{v} must lie strictly inside (0, 1)"));
                    }
                    cfg.threshold = v;
                    Ok("threshold")
                }
                "epsilon" => {
                    let v: f64 = expect(value, "number")?;
                    if !(v > 0.0) {
                        return Err(format!("{v} must be positive"));
                    }
                    cfg.epsilon = v;
                    Ok("epsilon")
                }
                "post_clamp" => {
                    cfg.post_clamp = expect(value, "boolean (true/false)")?;
                    Ok("post_clamp")
                }
                "dim" => {
                    cfg.dim = expect_positive(value)?;
                    Ok("dim")
                }
                "num_classes" => {
                    cfg.num_classes = expect_positive(value)?;
                    Ok("num_classes")
                }
                "train_per_class" => {
                    cfg.train_per_class = expect_positive(value)?;
                    Ok("train_per_class")
                }
                "test_per_class" => {
                    cfg.test_per_class = expect_positive(value)?;
                    Ok("test_per_class")
                }
                "text_noise_sigma" => {
                    cfg.text_noise_sigma = expect_non_negative(value)?;
                    Ok("text_noise_sigma")
                }
                "image_noise_sigma" => {
                    cfg.image_noise_sigma = expect_non_negative(value)?;
                    Ok("image_noise_sigma")
                }
                "gap_magnitude" => {
                    cfg.gap_magnitude = expect_non_negative(value)?;
                    Ok("gap_magnitude")
                }
                "epochs" => {
                    cfg.epochs = expect_positive(value)?;
                    Ok("epochs")
                }
                "learning_rate" => {
                    let v: f64 = expect(value, "number")?;
                    if !(v > 0.0) {
                        return Err(format!("{v} must be positive"));
                    }
                    cfg.learning_rate = v;
                    Ok("learning_rate")
                }
                "fractions" => {
                    cfg.fractions = parse_list(value, |s| {
                        let v: f64 = expect(s, "number")?;
                        if !(v > 0.0 && v <= 1.0) {
                            return Err(format!("fraction {v} must lie in (0, 1]"));
                        }
                        Ok(v)
                    })?;
                    Ok("fractions")
                }
                "seed" => {
                    cfg.seed = expect(value, "unsigned 64-bit integer")?;
                    Ok("seed")
                }
                other => Err(format!("unknown key '{other}'")),
            }
        };

        let canonical = apply(&mut cfg).map_err(fail)?;
        if seen.contains(&canonical) {
            return Err(Error::ConfigParse {
                line: line_no,
                message: format!("duplicate key '{canonical}'"),
            });
        }
        seen.push(canonical);
    }

    // cross-field: the similarity band must stay inside (0, 1)
    if cfg.epsilon >= cfg.threshold.min(1.0 - cfg.threshold) {
        return Err(Error::OutOfRange {
            name: "epsilon",
            value: cfg.epsilon,
            min: 0.0,
            max: cfg.threshold.min(1.0 - cfg.threshold),
        });
    }
    Ok(cfg)
}

fn expect_positive(raw: &str) -> std::result::Result<usize, String> {
    let v: usize = expect(raw, "positive integer")?;
    if v == 0 {
        return Err("must be at least 1".to_string());
    }
    Ok(v)
}

fn expect_non_negative(raw: &str) -> std::result::Result<f64, String> {
    let v: f64 = expect(raw, "number")?;
    if !(v >= 0.0) {
        return Err(format!("{v} must be non-negative"));
    }
    Ok(v)
}

pub fn parse_config(path: &Path) -> Result<RunConfig> {
    parse_config_str(&fs::read_to_string(path)?)
}

/// Canonical rendering: every key, fixed order, shortest round-trip floats.
/// `parse_config_str(render_config(c)) == c` for every valid config.
pub fn render_config(cfg: &RunConfig) -> String {
    let list = |items: &[f64]| {
        items
            .iter()
            .map(|v| format!("{v}"))
            .collect::<Vec<_>>()
            .join(",")
    };
    let injectors = cfg
        .injectors
        .iter()
        .map(|k| k.name())
        .collect::<Vec<_>>()
        .join(",");
    format!(
        "injectors = {injectors}\n\
         gaussian_scales = {}\n\
         pool_size = {}\n\
         threshold = {}\n\
         epsilon = {}\n\
         post_clamp = {}\n\
         dim = {}\n\
         num_classes = {}\n\
         train_per_class = {}\n\
         test_per_class = {}\n\
         text_noise_sigma = {}\n\
         image_noise_sigma = {}\n\
         gap_magnitude = {}\n\
         epochs = {}\n\
         learning_rate = {}\n\
         fractions = {}\n\
         seed = {}\n",
        list(&cfg.gaussian_scales),
        cfg.pool_size,
        cfg.threshold,
        cfg.epsilon,
        cfg.post_clamp,
        cfg.dim,
        cfg.num_classes,
        cfg.train_per_class,
        cfg.test_per_class,
        cfg.text_noise_sigma,
        cfg.image_noise_sigma,
        cfg.gap_magnitude,
        cfg.epochs,
        cfg.learning_rate,
        list(&cfg.fractions),
        cfg.seed,
    )
}

pub fn write_config(cfg: &RunConfig, path: &Path) -> Result<()> {
    atomic_write(path, render_config(cfg).as_bytes())
}
