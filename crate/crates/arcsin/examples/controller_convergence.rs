//! Drive the angle-range controller over many batches of random unit rows
//! and watch the measured batch similarity settle into the target band.
//!
//!     cargo run --example controller_convergence

use arcsin::injector::{ArcSinInjector, InjectorConfig};
use arcsin::math::{gaussian_sample, l2_normalize};
use arcsin::{EmbeddingBatch, Result, SeededRng};

fn unit_batch(rng: &mut SeededRng, rows: usize, cols: usize) -> Result<EmbeddingBatch> {
    let raw = gaussian_sample(rng, rows, cols)?;
    let rows: Result<Vec<Vec<f64>>> = raw.iter_rows().map(|r| l2_normalize(r)).collect();
    EmbeddingBatch::from_rows(rows?)
}

fn main() -> Result<()> {
    let batches = 500;
    let (rows, cols) = (64, 512);
    let cfg = InjectorConfig {
        pool_size: 8,
        threshold: 0.9,
        epsilon: 0.01,
        post_clamp: false,
        seed: 7,
    };
    println!(
        "target similarity {} +- {}, {} batches of {}x{}",
        cfg.threshold, cfg.epsilon, batches, rows, cols
    );

    let mut injector = ArcSinInjector::new(cfg)?;
    let mut data_rng = SeededRng::new(1);
    for _ in 0..batches {
        let batch = unit_batch(&mut data_rng, rows, cols)?;
        injector.forward(&batch)?;
    }

    let records = injector.trace().records();
    for r in records.iter().step_by(50) {
        println!(
            "batch {:3}  alpha {:.4}  avg_sim {:.4}  range [{:.4}, {:.4}]",
            r.batch, r.alpha, r.avg_similarity, r.lower, r.upper
        );
    }
    let trailing: Vec<f64> = records[batches - 100..]
        .iter()
        .map(|r| r.avg_similarity)
        .collect();
    let mean = trailing.iter().sum::<f64>() / trailing.len() as f64;
    let lo = trailing.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = trailing.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    println!("trailing-100 similarity: mean {mean:.5}, min {lo:.5}, max {hi:.5}");
    Ok(())
}
