//! Embedding file I/O: write a batch in both formats, read it back, and
//! export a deviation-curve table.
//!
//!     cargo run --example file_roundtrip

use arcsin::formats::{export_delta_curve, read_embeddings, write_embeddings, Format};
use arcsin::math::gaussian_sample;
use arcsin::{Result, SeededRng};

fn main() -> Result<()> {
    let dir = std::env::temp_dir().join("arcsin_file_roundtrip");
    std::fs::create_dir_all(&dir)?;

    let batch = gaussian_sample(&mut SeededRng::new(12), 8, 16)?;
    for format in [Format::Binary, Format::Text] {
        let path = dir.join(format!("embeddings.{}", format.name()));
        write_embeddings(&batch, &path, format)?;
        let back = read_embeddings(&path, format)?;
        let max_err = batch
            .as_slice()
            .iter()
            .zip(back.as_slice())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        println!(
            "{:<6} -> {} ({} bytes, max f32 quantization error {:.2e})",
            format.name(),
            path.display(),
            std::fs::metadata(&path)?.len(),
            max_err
        );
    }

    let curve = dir.join("delta_curve.csv");
    export_delta_curve(std::f64::consts::FRAC_PI_6, 201, &curve)?;
    println!("curve  -> {}", curve.display());
    Ok(())
}
