//! The headline experiment: train a linear probe on noisy "text" embeddings
//! and evaluate it on gap-shifted "image" embeddings. Compares no noise,
//! fixed-scale Gaussian noise, and the adaptive injector.
//!
//!     cargo run --example cross_modal_transfer [seed ...]

use arcsin::experiment::{median, run_experiment, ExperimentConfig, InjectorSpec};
use arcsin::injector::InjectorConfig;
use arcsin::probe::TrainOptions;
use arcsin::scenario::ScenarioConfig;
use arcsin::Result;

fn main() -> Result<()> {
    let seeds: Vec<u64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("seeds must be unsigned integers"))
        .collect();
    let seeds = if seeds.is_empty() { vec![0] } else { seeds };

    let injectors = vec![
        InjectorSpec::Identity,
        InjectorSpec::FixedGaussian { scale: 0.05 },
        InjectorSpec::FixedGaussian { scale: 0.1 },
        InjectorSpec::FixedGaussian { scale: 0.2 },
        InjectorSpec::ArcSin {
            config: InjectorConfig::default(),
        },
    ];
    let labels: Vec<String> = injectors.iter().map(|s| s.label()).collect();
    let mut image_accs: Vec<Vec<f64>> = vec![Vec::new(); injectors.len()];
    let mut text_accs: Vec<Vec<f64>> = vec![Vec::new(); injectors.len()];

    for &seed in &seeds {
        let cfg = ExperimentConfig {
            scenario: ScenarioConfig::default(),
            injectors: injectors.clone(),
            training: TrainOptions::default(),
            master_seed: seed,
        };
        let report = run_experiment(&cfg)?;
        println!("seed {seed}");
        for (i, r) in report.results.iter().enumerate() {
            println!(
                "  {:<14} image {:.4}  text {:.4}  train-sim {:.4}",
                r.label, r.image_accuracy, r.text_accuracy, r.mean_train_similarity
            );
            image_accs[i].push(r.image_accuracy);
            text_accs[i].push(r.text_accuracy);
        }
    }

    if seeds.len() > 1 {
        println!("medians over {} seeds", seeds.len());
        for (i, label) in labels.iter().enumerate() {
            println!(
                "  {:<14} image {:.4}  text {:.4}",
                label,
                median(&image_accs[i]),
                median(&text_accs[i])
            );
        }
    }
    Ok(())
}
