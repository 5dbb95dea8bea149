//! End-to-end offline augmentation through the library API: generate unit
//! rows, stream them through the injector in batches, and report the
//! similarity the controller settled on. The `arcsin augment` subcommand
//! wraps exactly this flow for files on disk.
//!
//!     cargo run --example augment_file

use arcsin::injector::{ArcSinInjector, InjectorConfig};
use arcsin::math::{batch_cosine_sim, clamp_components, gaussian_sample, l2_normalize, mean};
use arcsin::{EmbeddingBatch, Result, SeededRng};

fn main() -> Result<()> {
    let (total_rows, cols, batch_rows) = (1000, 64, 64);
    let mut data_rng = SeededRng::new(5);
    let raw = gaussian_sample(&mut data_rng, total_rows, cols)?;
    let unit: Result<Vec<Vec<f64>>> = raw.iter_rows().map(|r| l2_normalize(r)).collect();
    let input = EmbeddingBatch::from_rows(unit?)?;

    let mut injector = ArcSinInjector::new(InjectorConfig {
        seed: 9,
        ..InjectorConfig::default()
    })?;

    let mut outputs = Vec::new();
    let mut sims = Vec::new();
    let mut start = 0;
    while start < input.rows() {
        let len = batch_rows.min(input.rows() - start);
        let chunk = input.slice_rows(start, len)?;
        let out = injector.forward(&chunk)?;
        sims.extend(batch_cosine_sim(&clamp_components(&chunk, -1.0, 1.0)?, &out)?);
        outputs.push(out);
        start += len;
    }
    let augmented = EmbeddingBatch::concat_rows(&outputs)?;

    println!(
        "augmented {} rows in batches of {}; mean similarity {:.4}",
        augmented.rows(),
        batch_rows,
        mean(&sims)
    );
    println!(
        "final angle range [{:.4}, {:.4}] after {} controller steps",
        injector.state().lower(),
        injector.state().upper(),
        injector.trace().len()
    );
    Ok(())
}
