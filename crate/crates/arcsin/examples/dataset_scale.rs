//! Dataset-scale sweep: rerun the transfer experiment with the training set
//! shrunk to a fraction of its size against a fixed test set. More training
//! data means better image-side accuracy.
//!
//!     cargo run --example dataset_scale [seed]

use arcsin::experiment::{scale_sweep, ExperimentConfig, InjectorSpec};
use arcsin::injector::InjectorConfig;
use arcsin::probe::TrainOptions;
use arcsin::scenario::ScenarioConfig;
use arcsin::Result;

fn main() -> Result<()> {
    let seed: u64 = std::env::args()
        .nth(1)
        .map(|a| a.parse().expect("seed must be an unsigned integer"))
        .unwrap_or(0);
    let cfg = ExperimentConfig {
        scenario: ScenarioConfig::default(),
        injectors: vec![InjectorSpec::ArcSin {
            config: InjectorConfig::default(),
        }],
        training: TrainOptions::default(),
        master_seed: seed,
    };

    println!("seed {seed}, adaptive injector, fractions of 200 training rows per class");
    for report in scale_sweep(&cfg, &[0.25, 0.5, 1.0])? {
        let r = &report.results[0];
        println!(
            "  fraction {:<5} ({} rows/class): image {:.4}  text {:.4}",
            report.train_fraction,
            report.scenario.train_per_class,
            r.image_accuracy,
            r.text_accuracy
        );
    }
    Ok(())
}
