//! Linear softmax probe trained by full-batch gradient descent.
//!
//! The probe is the smallest downstream model that exhibits the
//! train-on-text/test-on-image transfer effect, and it is fully
//! deterministic: zero initialization, fixed epoch count, full-batch
//! updates. The augmentation closure runs on the training batch once per
//! epoch, so every update sees fresh noise.

use crate::batch::EmbeddingBatch;
use crate::error::{Error, Result};
use crate::math::{batch_cosine_sim, mean};
use crate::scenario::SyntheticScenario;

#[derive(Clone, Debug, PartialEq)]
pub struct LinearProbe {
    /// K x C, row-major.
    weights: Vec<f64>,
    bias: Vec<f64>,
    classes: usize,
    dim: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrainOptions {
    pub epochs: usize,
    pub learning_rate: f64,
}

impl Default for TrainOptions {
    fn default() -> Self {
        TrainOptions {
            epochs: 300,
            learning_rate: 0.1,
        }
    }
}

/// Per-epoch observability from one training run.
#[derive(Clone, Debug, PartialEq)]
pub struct TrainStats {
    /// Cross-entropy after each epoch's update.
    pub losses: Vec<f64>,
    /// Mean over epochs of the batch-average cosine similarity between the
    /// raw and the augmented training batch.
    pub mean_similarity: f64,
}

impl LinearProbe {
    pub fn zeros(classes: usize, dim: usize) -> Self {
        LinearProbe {
            weights: vec![0.0; classes * dim],
            bias: vec![0.0; classes],
            classes,
            dim,
        }
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn bias(&self) -> &[f64] {
        &self.bias
    }

    fn logits_into(&self, row: &[f64], out: &mut [f64]) {
        for k in 0..self.classes {
            let w = &self.weights[k * self.dim..(k + 1) * self.dim];
            let mut acc = self.bias[k];
            for (wi, xi) in w.iter().zip(row) {
                acc += wi * xi;
            }
            out[k] = acc;
        }
    }

    /// Argmax class per row; ties resolve to the lowest class index.
    pub fn predict(&self, batch: &EmbeddingBatch) -> Result<Vec<usize>> {
        if batch.cols() != self.dim {
            return Err(Error::ShapeMismatch {
                left: (batch.rows(), batch.cols()),
                right: (self.classes, self.dim),
            });
        }
        let mut logits = vec![0.0; self.classes];
        let mut preds = Vec::with_capacity(batch.rows());
        for row in batch.iter_rows() {
            self.logits_into(row, &mut logits);
            let mut best = 0;
            for k in 1..self.classes {
                if logits[k] > logits[best] {
                    best = k;
                }
            }
            preds.push(best);
        }
        Ok(preds)
    }
}

fn check_labels(labels: &[usize], rows: usize, classes: usize) -> Result<()> {
    if labels.len() != rows {
        return Err(Error::LengthMismatch {
            left: labels.len(),
            right: rows,
        });
    }
    if let Some(&bad) = labels.iter().find(|&&l| l >= classes) {
        return Err(Error::OutOfRange {
            name: "label",
            value: bad as f64,
            min: 0.0,
            max: (classes - 1) as f64,
        });
    }
    Ok(())
}

/// Softmax cross-entropy and its gradient, accumulated over the full batch.
/// Returns the mean loss; gradients are written into `grad_w`/`grad_b`.
fn loss_and_grads(
    probe: &LinearProbe,
    batch: &EmbeddingBatch,
    labels: &[usize],
    grad_w: &mut [f64],
    grad_b: &mut [f64],
) -> f64 {
    let classes = probe.classes;
    let dim = probe.dim;
    let inv_b = 1.0 / batch.rows() as f64;
    grad_w.fill(0.0);
    grad_b.fill(0.0);
    let mut logits = vec![0.0; classes];
    let mut total_loss = 0.0;
    for (row, &label) in batch.iter_rows().zip(labels) {
        probe.logits_into(row, &mut logits);
        let max = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut denom = 0.0;
        for l in logits.iter_mut() {
            *l = (*l - max).exp();
            denom += *l;
        }
        total_loss += -(logits[label] / denom).ln();
        for k in 0..classes {
            let g = (logits[k] / denom - if k == label { 1.0 } else { 0.0 }) * inv_b;
            grad_b[k] += g;
            let gw = &mut grad_w[k * dim..(k + 1) * dim];
            for (w, x) in gw.iter_mut().zip(row) {
                *w += g * x;
            }
        }
    }
    total_loss * inv_b
}

/// Train on the scenario's text side, re-augmenting the batch every epoch
/// through `augment`. Errors if the loss ever becomes non-finite, naming
/// the epoch.
pub fn train_probe<F>(
    scenario: &SyntheticScenario,
    mut augment: F,
    opts: &TrainOptions,
) -> Result<(LinearProbe, TrainStats)>
where
    F: FnMut(&EmbeddingBatch) -> Result<EmbeddingBatch>,
{
    if opts.epochs == 0 {
        return Err(Error::Empty("epochs"));
    }
    if !(opts.learning_rate > 0.0) {
        return Err(Error::OutOfRange {
            name: "learning_rate",
            value: opts.learning_rate,
            min: f64::MIN_POSITIVE,
            max: f64::INFINITY,
        });
    }
    let train = &scenario.train_text;
    let classes = scenario.config.num_classes;
    check_labels(&train.labels, train.embeddings.rows(), classes)?;

    let mut probe = LinearProbe::zeros(classes, scenario.config.dim);
    let mut grad_w = vec![0.0; probe.weights.len()];
    let mut grad_b = vec![0.0; probe.bias.len()];
    let mut losses = Vec::with_capacity(opts.epochs);
    let mut sims = Vec::with_capacity(opts.epochs);

    for epoch in 0..opts.epochs {
        let augmented = augment(&train.embeddings)?;
        if !augmented.same_shape(&train.embeddings) {
            return Err(Error::ShapeMismatch {
                left: train.embeddings.shape(),
                right: augmented.shape(),
            });
        }
        sims.push(mean(&batch_cosine_sim(&train.embeddings, &augmented)?));
        let loss = loss_and_grads(&probe, &augmented, &train.labels, &mut grad_w, &mut grad_b);
        if !loss.is_finite() {
            return Err(Error::TrainingDiverged { epoch });
        }
        for (w, g) in probe.weights.iter_mut().zip(&grad_w) {
            *w -= opts.learning_rate * g;
        }
        for (b, g) in probe.bias.iter_mut().zip(&grad_b) {
            *b -= opts.learning_rate * g;
        }
        losses.push(loss);
    }

    Ok((
        probe,
        TrainStats {
            losses,
            mean_similarity: mean(&sims),
        },
    ))
}

/// Fraction of rows whose predicted class equals the label.
pub fn eval_probe(probe: &LinearProbe, batch: &EmbeddingBatch, labels: &[usize]) -> Result<f64> {
    check_labels(labels, batch.rows(), probe.classes)?;
    let preds = probe.predict(batch)?;
    let hits = preds.iter().zip(labels).filter(|(p, l)| p == l).count();
    Ok(hits as f64 / labels.len() as f64)
}
