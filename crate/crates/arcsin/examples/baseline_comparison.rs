//! Where fixed-scale Gaussian noise and the adaptive injector differ:
//! deviation size versus component magnitude, at matched mean similarity.
//!
//!     cargo run --example baseline_comparison

use arcsin::baseline::gaussian_inject;
use arcsin::injector::inject_plain;
use arcsin::math::{batch_cosine_sim, mean};
use arcsin::{EmbeddingBatch, Result, SeededRng};

fn bucket_spread(original: &EmbeddingBatch, injected: &EmbeddingBatch) -> Vec<f64> {
    // rms deviation per |y| bucket: [0,.25), [.25,.5), [.5,.75), [.75,1]
    let mut sums = [0.0; 4];
    let mut counts = [0usize; 4];
    for (y, o) in original.as_slice().iter().zip(injected.as_slice()) {
        let b = ((y.abs() * 4.0) as usize).min(3);
        sums[b] += (o - y) * (o - y);
        counts[b] += 1;
    }
    (0..4).map(|b| (sums[b] / counts[b] as f64).sqrt()).collect()
}

fn main() -> Result<()> {
    let n = 100_000;
    let mut rng = SeededRng::new(3);
    let values: Vec<f64> = (0..n).map(|_| rng.uniform_in(-1.0, 1.0)).collect();
    let e = EmbeddingBatch::from_flat(1, n, values)?;

    let gauss = gaussian_inject(&e, 0.2, &mut SeededRng::new(1))?;
    let adaptive = inject_plain(&e, 0.35, &mut SeededRng::new(1))?;

    println!(
        "mean similarity: gaussian {:.4}, adaptive {:.4}",
        mean(&batch_cosine_sim(&e, &gauss)?),
        mean(&batch_cosine_sim(&e, &adaptive)?)
    );
    println!("rms deviation by |y| bucket (0-0.25, 0.25-0.5, 0.5-0.75, 0.75-1):");
    let g = bucket_spread(&e, &gauss);
    let a = bucket_spread(&e, &adaptive);
    println!("  gaussian  {:.4} {:.4} {:.4} {:.4}   (flat)", g[0], g[1], g[2], g[3]);
    println!("  adaptive  {:.4} {:.4} {:.4} {:.4}   (shrinks near saturation)", a[0], a[1], a[2], a[3]);
    Ok(())
}
