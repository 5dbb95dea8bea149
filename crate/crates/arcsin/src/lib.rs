//! Adaptive, cosine-similarity-bounded noise injection for embedding
//! vectors.
//!
//! Contrastively trained dual encoders leave a systematic offset (a
//! "modality gap") between text and image embeddings, which hurts models
//! trained on one modality and evaluated on the other. Perturbing
//! training-time embeddings with noise narrows that gap, but fixed-scale
//! Gaussian noise treats every feature component the same and can destroy
//! components that are near saturation.
//!
//! This crate implements a rotation-bounded alternative: each component's
//! perturbation is scaled by the exact deviation a bounded 2-D rotation
//! would permit, a pool of candidate noise draws keeps the most similar
//! augmentation per row, and a feedback controller adapts the rotation
//! budget so the measured batch similarity tracks a target threshold.
//! Fixed-scale Gaussian and identity baselines, a synthetic modality-gap
//! experiment (train a linear probe on noisy "text", evaluate on offset
//! "image" embeddings), deterministic file formats, and a CLI round out the
//! toolkit.
//!
//! Start with [`injector::ArcSinInjector`] for augmentation,
//! [`experiment::run_experiment`] for the synthetic transfer harness, or
//! the runnable programs under `examples/`.

#![forbid(unsafe_code)]

pub mod baseline;
pub mod batch;
pub mod cli;
pub mod error;
pub mod experiment;
pub mod formats;
pub mod injector;
pub mod math;
pub mod probe;
pub mod rng;
pub mod scenario;

pub use batch::EmbeddingBatch;
pub use error::{Error, Result};
pub use injector::{ArcSinInjector, AngleRangeState, InjectorConfig};
pub use rng::SeededRng;
