//! Synthetic paired text/image embeddings with a controlled modality gap.
//!
//! Each class gets a unit prototype on the sphere. "Text" rows are noisy
//! renormalized copies of their prototype; "image" rows additionally receive
//! a constant offset along one shared unit gap vector before
//! renormalization. Training uses the text side only; evaluation uses the
//! image side, so the gap is the one distribution shift between train and
//! test.

use crate::batch::EmbeddingBatch;
use crate::error::{Error, Result};
use crate::math::l2_normalize;
use crate::rng::SeededRng;

#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioConfig {
    pub dim: usize,
    pub num_classes: usize,
    pub train_per_class: usize,
    pub test_per_class: usize,
    pub text_noise_sigma: f64,
    pub image_noise_sigma: f64,
    pub gap_magnitude: f64,
    pub seed: u64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            dim: 64,
            num_classes: 10,
            train_per_class: 200,
            test_per_class: 200,
            text_noise_sigma: 0.1,
            image_noise_sigma: 0.1,
            gap_magnitude: 0.5,
            seed: 0,
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 || self.num_classes == 0 {
            return Err(Error::InvalidShape {
                rows: self.num_classes,
                cols: self.dim,
            });
        }
        if self.train_per_class == 0 {
            return Err(Error::Empty("training rows per class"));
        }
        if self.test_per_class == 0 {
            return Err(Error::Empty("test rows per class"));
        }
        for (name, v) in [
            ("text_noise_sigma", self.text_noise_sigma),
            ("image_noise_sigma", self.image_noise_sigma),
            ("gap_magnitude", self.gap_magnitude),
        ] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::OutOfRange {
                    name,
                    value: v,
                    min: 0.0,
                    max: f64::INFINITY,
                });
            }
        }
        Ok(())
    }
}

/// Embeddings plus per-row class labels.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledBatch {
    pub embeddings: EmbeddingBatch,
    pub labels: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SyntheticScenario {
    pub config: ScenarioConfig,
    /// K unit prototypes, one row per class.
    pub prototypes: EmbeddingBatch,
    /// The shared unit gap direction.
    pub gap: Vec<f64>,
    pub train_text: LabeledBatch,
    pub test_text: LabeledBatch,
    pub test_image: LabeledBatch,
}

fn unit_row(rng: &mut SeededRng, dim: usize) -> Vec<f64> {
    loop {
        let mut v = vec![0.0; dim];
        rng.fill_normal(&mut v);
        // a zero draw has probability zero but would break normalization
        if let Ok(u) = l2_normalize(&v) {
            return u;
        }
    }
}

/// Build the full scenario. Prototypes, gap, train set, and test set each
/// use a child generator derived in that order, so the test set is
/// identical across `train_per_class` values (the dataset-scale sweep
/// shrinks training data against a fixed test set).
pub fn generate_scenario(cfg: &ScenarioConfig, rng: &mut SeededRng) -> Result<SyntheticScenario> {
    cfg.validate()?;
    let mut proto_rng = rng.child();
    let mut gap_rng = rng.child();
    let mut train_rng = rng.child();
    let mut test_rng = rng.child();

    let prototypes = EmbeddingBatch::from_rows(
        (0..cfg.num_classes)
            .map(|_| unit_row(&mut proto_rng, cfg.dim))
            .collect(),
    )?;
    let gap = unit_row(&mut gap_rng, cfg.dim);

    let noisy_row = |proto: &[f64], sigma: f64, offset: f64, gap: &[f64], rng: &mut SeededRng| {
        let mut z = vec![0.0; proto.len()];
        rng.fill_normal(&mut z);
        let v: Vec<f64> = proto
            .iter()
            .zip(&z)
            .zip(gap)
            .map(|((p, zi), g)| p + sigma * zi + offset * g)
            .collect();
        l2_normalize(&v)
    };

    let mut train_rows = Vec::with_capacity(cfg.num_classes * cfg.train_per_class);
    let mut train_labels = Vec::with_capacity(train_rows.capacity());
    for class in 0..cfg.num_classes {
        for _ in 0..cfg.train_per_class {
            train_rows.push(noisy_row(
                prototypes.row(class),
                cfg.text_noise_sigma,
                0.0,
                &gap,
                &mut train_rng,
            )?);
            train_labels.push(class);
        }
    }

    let mut text_rows = Vec::with_capacity(cfg.num_classes * cfg.test_per_class);
    let mut image_rows = Vec::with_capacity(text_rows.capacity());
    let mut test_labels = Vec::with_capacity(text_rows.capacity());
    for class in 0..cfg.num_classes {
        for _ in 0..cfg.test_per_class {
            text_rows.push(noisy_row(
                prototypes.row(class),
                cfg.text_noise_sigma,
                0.0,
                &gap,
                &mut test_rng,
            )?);
            image_rows.push(noisy_row(
                prototypes.row(class),
                cfg.image_noise_sigma,
                cfg.gap_magnitude,
                &gap,
                &mut test_rng,
            )?);
            test_labels.push(class);
        }
    }

    Ok(SyntheticScenario {
        config: cfg.clone(),
        prototypes,
        gap,
        train_text: LabeledBatch {
            embeddings: EmbeddingBatch::from_rows(train_rows)?,
            labels: train_labels,
        },
        test_text: LabeledBatch {
            embeddings: EmbeddingBatch::from_rows(text_rows)?,
            labels: test_labels.clone(),
        },
        test_image: LabeledBatch {
            embeddings: EmbeddingBatch::from_rows(image_rows)?,
            labels: test_labels,
        },
    })
}
