//! Effect of the injection pool: picking the best of several candidate
//! noise draws per row raises similarity at a fixed rotation budget, which
//! in turn lets the controller afford larger budgets.
//!
//!     cargo run --example noise_pool

use arcsin::injector::{build_noise_pool, inject_with_pool};
use arcsin::math::{batch_cosine_sim, gaussian_sample, l2_normalize, mean};
use arcsin::{EmbeddingBatch, Result, SeededRng};

fn main() -> Result<()> {
    let (rows, cols) = (32, 128);
    let alpha = 0.05;
    let batches = 50;

    println!("mean selected similarity at alpha = {alpha}, {batches} batches of {rows}x{cols}");
    for pool_size in [1, 2, 4, 8, 16] {
        let mut data_rng = SeededRng::new(11);
        let mut noise_rng = SeededRng::new(42);
        let mut sims = Vec::new();
        for _ in 0..batches {
            let raw = gaussian_sample(&mut data_rng, rows, cols)?;
            let unit: Result<Vec<Vec<f64>>> = raw.iter_rows().map(|r| l2_normalize(r)).collect();
            let e = EmbeddingBatch::from_rows(unit?)?;
            let pool = build_noise_pool(&mut noise_rng, rows, cols, pool_size)?;
            let out = inject_with_pool(&e, alpha, &pool)?;
            sims.push(mean(&batch_cosine_sim(&e, &out)?));
        }
        println!("  pool {pool_size:>2}: {:.5}", mean(&sims));
    }
    Ok(())
}
