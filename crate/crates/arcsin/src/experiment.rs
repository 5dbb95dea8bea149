//! Seeded end-to-end runs: train one probe per injector on the text side of
//! a shared scenario, evaluate both sides, and collect a report. The
//! dataset-scale sweep reruns the experiment with the training set shrunk
//! against a fixed test set.

use crate::baseline::{gaussian_inject, identity_inject};
use crate::batch::EmbeddingBatch;
use crate::error::{Error, Result};
use crate::injector::{ArcSinInjector, InjectionTrace, InjectorConfig};
use crate::probe::{eval_probe, train_probe, TrainOptions};
use crate::rng::SeededRng;
use crate::scenario::{generate_scenario, ScenarioConfig};

/// What to run; seeds are assigned by the harness, not the spec.
#[derive(Clone, Debug, PartialEq)]
pub enum InjectorSpec {
    Identity,
    FixedGaussian { scale: f64 },
    ArcSin { config: InjectorConfig },
}

impl InjectorSpec {
    /// Stable report label: "identity", "gaussian@<scale>", "arcsin".
    pub fn label(&self) -> String {
        match self {
            InjectorSpec::Identity => "identity".to_string(),
            InjectorSpec::FixedGaussian { scale } => format!("gaussian@{scale}"),
            InjectorSpec::ArcSin { .. } => "arcsin".to_string(),
        }
    }

    pub fn build(&self, seed: u64) -> Result<RunInjector> {
        match self {
            InjectorSpec::Identity => Ok(RunInjector::Identity),
            InjectorSpec::FixedGaussian { scale } => {
                if !(*scale >= 0.0) {
                    return Err(Error::OutOfRange {
                        name: "scale",
                        value: *scale,
                        min: 0.0,
                        max: f64::INFINITY,
                    });
                }
                Ok(RunInjector::Gaussian {
                    scale: *scale,
                    rng: SeededRng::new(seed),
                })
            }
            InjectorSpec::ArcSin { config } => {
                let mut config = config.clone();
                config.seed = seed;
                Ok(RunInjector::ArcSin(Box::new(ArcSinInjector::new(config)?)))
            }
        }
    }
}

/// A ready-to-run injector instance.
pub enum RunInjector {
    Identity,
    Gaussian { scale: f64, rng: SeededRng },
    ArcSin(Box<ArcSinInjector>),
}

impl RunInjector {
    pub fn inject(&mut self, e: &EmbeddingBatch) -> Result<EmbeddingBatch> {
        match self {
            RunInjector::Identity => Ok(identity_inject(e)),
            RunInjector::Gaussian { scale, rng } => gaussian_inject(e, *scale, rng),
            RunInjector::ArcSin(inj) => inj.forward(e),
        }
    }

    fn into_trace(self) -> Option<InjectionTrace> {
        match self {
            RunInjector::ArcSin(inj) => Some(inj.trace().clone()),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub scenario: ScenarioConfig,
    pub injectors: Vec<InjectorSpec>,
    pub training: TrainOptions,
    pub master_seed: u64,
}

/// One injector's scores within a run.
#[derive(Clone, Debug, PartialEq)]
pub struct InjectorResult {
    pub label: String,
    pub image_accuracy: f64,
    pub text_accuracy: f64,
    pub mean_train_similarity: f64,
    /// Controller trajectory; present for the adaptive injector only.
    pub trace: Option<InjectionTrace>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentReport {
    pub master_seed: u64,
    /// Scenario actually generated (seed field holds the derived seed).
    pub scenario: ScenarioConfig,
    pub training: TrainOptions,
    /// Training-set fraction this run used (1.0 outside sweeps).
    pub train_fraction: f64,
    pub results: Vec<InjectorResult>,
}

/// Generate one scenario from the master seed, then train and evaluate one
/// independently seeded probe per injector.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    if cfg.injectors.is_empty() {
        return Err(Error::Empty("injector list"));
    }
    let mut master = SeededRng::new(cfg.master_seed);
    let mut scenario_cfg = cfg.scenario.clone();
    scenario_cfg.seed = master.next_u64();
    let scenario = generate_scenario(&scenario_cfg, &mut SeededRng::new(scenario_cfg.seed))?;

    let mut results = Vec::with_capacity(cfg.injectors.len());
    for spec in &cfg.injectors {
        let seed = master.next_u64();
        let mut injector = spec.build(seed)?;
        let (probe, stats) = train_probe(&scenario, |e| injector.inject(e), &cfg.training)?;
        let image_accuracy = eval_probe(
            &probe,
            &scenario.test_image.embeddings,
            &scenario.test_image.labels,
        )?;
        let text_accuracy = eval_probe(
            &probe,
            &scenario.test_text.embeddings,
            &scenario.test_text.labels,
        )?;
        results.push(InjectorResult {
            label: spec.label(),
            image_accuracy,
            text_accuracy,
            mean_train_similarity: stats.mean_similarity,
            trace: injector.into_trace(),
        });
    }

    Ok(ExperimentReport {
        master_seed: cfg.master_seed,
        scenario: scenario_cfg,
        training: cfg.training,
        train_fraction: 1.0,
        results,
    })
}

/// Rerun the experiment with `train_per_class` scaled by each fraction in
/// (0, 1]. The master seed is reused, so every rerun shares one test set.
pub fn scale_sweep(cfg: &ExperimentConfig, fractions: &[f64]) -> Result<Vec<ExperimentReport>> {
    let mut reports = Vec::with_capacity(fractions.len());
    for &fraction in fractions {
        if !(fraction > 0.0 && fraction <= 1.0) {
            return Err(Error::OutOfRange {
                name: "fraction",
                value: fraction,
                min: 0.0,
                max: 1.0,
            });
        }
        let scaled = (cfg.scenario.train_per_class as f64 * fraction).round() as usize;
        if scaled == 0 {
            return Err(Error::Empty("training rows per class after scaling"));
        }
        let mut sub = cfg.clone();
        sub.scenario.train_per_class = scaled;
        let mut report = run_experiment(&sub)?;
        report.train_fraction = fraction;
        reports.push(report);
    }
    Ok(reports)
}

/// Median with the even-count convention of averaging the two middle values.
pub fn median(values: &[f64]) -> f64 {
    assert!(!values.is_empty(), "median of empty slice");
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}
