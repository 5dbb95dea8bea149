//! Command-line front end.
//!
//! Subcommands: `augment` (noise-inject an embedding file), `curve`
//! (deviation-bound table), `simulate` (synthetic cross-modal experiment),
//! `stats` (similarity quantiles between two files).
//!
//! Exit codes: 0 success, 1 usage or validation error, 2 runtime error
//! (I/O failure, training divergence).

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::batch::EmbeddingBatch;
use crate::error::{Error, Result};
use crate::experiment::{run_experiment, scale_sweep, ExperimentReport};
use crate::formats::{
    detect_format, parse_config, read_embeddings, write_aggregate, write_embeddings, write_report,
    export_delta_curve, Format,
};
use crate::injector::{inject_plain, ArcSinInjector, InjectorConfig};
use crate::math::{batch_cosine_sim, clamp_components};
use crate::rng::SeededRng;

#[derive(Parser)]
#[command(
    name = "arcsin",
    version,
    about = "Cosine-similarity-bounded noise injection for embedding files, with a synthetic cross-modal transfer harness"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inject similarity-bounded noise into an embedding file
    Augment(AugmentArgs),
    /// Export the deviation-bound curve over component values
    Curve(CurveArgs),
    /// Run the synthetic cross-modal transfer experiment from a config file
    Simulate(SimulateArgs),
    /// Print per-row similarity statistics between two embedding files
    Stats(StatsArgs),
}

#[derive(Args)]
struct AugmentArgs {
    /// Input embedding file
    #[arg(long)]
    input: PathBuf,
    /// Output embedding file (written atomically)
    #[arg(long)]
    output: PathBuf,
    /// File format: auto detects the input and mirrors it on output
    #[arg(long, default_value = "auto")]
    format: String,
    /// Target batch-average similarity for the controller
    #[arg(long, default_value_t = 0.9)]
    threshold: f64,
    /// Half-width of the controller's no-update band
    #[arg(long, default_value_t = 0.01)]
    epsilon: f64,
    /// Noise pool candidates per batch
    #[arg(long, default_value_t = 8)]
    pool: usize,
    /// Rows per forward batch
    #[arg(long, default_value_t = 64)]
    batch: usize,
    /// Bypass the controller and inject at this fixed rotation budget
    #[arg(long)]
    alpha_fixed: Option<f64>,
    /// Clamp outputs back into [-1, 1]
    #[arg(long)]
    post_clamp: bool,
    /// Seed for the noise stream
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct CurveArgs {
    /// Rotation budget in radians, within [0, pi/2]
    #[arg(long)]
    alpha: f64,
    /// Grid points across [-1, 1]
    #[arg(long, default_value_t = 201)]
    points: usize,
    /// Output CSV path
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args)]
struct SimulateArgs {
    /// Run configuration (flat key = value file)
    #[arg(long)]
    config: PathBuf,
    /// Output path prefix; writes <prefix>-seed<N>.txt and <prefix>-aggregate.txt
    #[arg(long)]
    out: PathBuf,
    /// Master seeds, comma separated; defaults to the config's seed
    #[arg(long, value_delimiter = ',')]
    seeds: Option<Vec<u64>>,
}

#[derive(Args)]
struct StatsArgs {
    /// Embeddings under inspection (e.g. an augmented file)
    #[arg(long)]
    input: PathBuf,
    /// Reference embeddings compared against, row by row
    #[arg(long)]
    reference: PathBuf,
}

/// Parse argv and run; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Augment(args) => cmd_augment(args),
        Command::Curve(args) => cmd_curve(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Stats(args) => cmd_stats(args),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn resolve_format(flag: &str, input: &PathBuf) -> Result<Format> {
    match flag {
        "auto" => detect_format(input),
        other => other.parse(),
    }
}

fn cmd_augment(args: AugmentArgs) -> Result<()> {
    if args.batch == 0 {
        return Err(Error::OutOfRange {
            name: "batch",
            value: 0.0,
            min: 1.0,
            max: f64::INFINITY,
        });
    }
    let format = resolve_format(&args.format, &args.input)?;
    let input = read_embeddings(&args.input, format)?;

    let mut injector = None;
    let mut rng = SeededRng::new(args.seed);
    if args.alpha_fixed.is_none() {
        injector = Some(ArcSinInjector::new(InjectorConfig {
            pool_size: args.pool,
            threshold: args.threshold,
            epsilon: args.epsilon,
            post_clamp: args.post_clamp,
            seed: args.seed,
        })?);
    }

    let mut chunks = Vec::new();
    let mut sim_sum = 0.0;
    let mut start = 0;
    while start < input.rows() {
        let len = args.batch.min(input.rows() - start);
        let chunk = input.slice_rows(start, len)?;
        let clamped = clamp_components(&chunk, -1.0, 1.0)?;
        let out = match (&mut injector, args.alpha_fixed) {
            (Some(inj), _) => inj.forward(&chunk)?,
            (None, Some(alpha)) => {
                let raw = inject_plain(&clamped, alpha, &mut rng)?;
                if args.post_clamp {
                    clamp_components(&raw, -1.0, 1.0)?
                } else {
                    raw
                }
            }
            (None, None) => unreachable!(),
        };
        sim_sum += batch_cosine_sim(&clamped, &out)?.iter().sum::<f64>();
        chunks.push(out);
        start += len;
    }

    let output = EmbeddingBatch::concat_rows(&chunks)?;
    write_embeddings(&output, &args.output, format)?;

    let mean_similarity = sim_sum / output.rows() as f64;
    let (lo, hi) = match (&injector, args.alpha_fixed) {
        (Some(inj), _) => (inj.state().lower(), inj.state().upper()),
        (None, Some(alpha)) => (alpha, alpha),
        (None, None) => unreachable!(),
    };
    println!(
        "rows={} mean_similarity={} angle_range=[{},{}]",
        output.rows(),
        mean_similarity,
        lo,
        hi
    );
    Ok(())
}

fn cmd_curve(args: CurveArgs) -> Result<()> {
    export_delta_curve(args.alpha, args.points, &args.output)?;
    println!("wrote {} ({} points)", args.output.display(), args.points);
    Ok(())
}

fn suffixed(prefix: &PathBuf, suffix: &str) -> PathBuf {
    let mut name = prefix.file_name().map(|s| s.to_os_string()).unwrap_or_default();
    name.push(suffix);
    prefix.with_file_name(name)
}

fn cmd_simulate(args: SimulateArgs) -> Result<()> {
    let cfg = parse_config(&args.config)?;
    if cfg.injector_specs().is_empty() {
        return Err(Error::Empty("injector list"));
    }
    let seeds = args.seeds.unwrap_or_else(|| vec![cfg.seed]);
    if seeds.is_empty() {
        return Err(Error::Empty("seed list"));
    }

    let mut all_reports: Vec<ExperimentReport> = Vec::new();
    for &seed in &seeds {
        let exp_cfg = cfg.experiment_config(seed);
        let base = run_experiment(&exp_cfg)?;
        let path = suffixed(&args.out, &format!("-seed{seed}.txt"));
        write_report(&base, &path)?;
        println!("wrote {}", path.display());
        all_reports.push(base);

        if !cfg.fractions.is_empty() {
            for report in scale_sweep(&exp_cfg, &cfg.fractions)? {
                let path = suffixed(
                    &args.out,
                    &format!("-seed{seed}-fraction{}.txt", report.train_fraction),
                );
                write_report(&report, &path)?;
                println!("wrote {}", path.display());
                all_reports.push(report);
            }
        }
    }

    let agg_path = suffixed(&args.out, "-aggregate.txt");
    write_aggregate(&all_reports, &agg_path)?;
    println!("wrote {}", agg_path.display());
    Ok(())
}

/// Quantile with linear interpolation between order statistics.
fn quantile(sorted: &[f64], p: f64) -> f64 {
    let h = p * (sorted.len() - 1) as f64;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

fn cmd_stats(args: StatsArgs) -> Result<()> {
    let input = read_embeddings(&args.input, detect_format(&args.input)?)?;
    let reference = read_embeddings(&args.reference, detect_format(&args.reference)?)?;
    let sims = batch_cosine_sim(&reference, &input)?;
    let mut sorted = sims.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mean = sims.iter().sum::<f64>() / sims.len() as f64;
    println!("rows = {}", sims.len());
    println!("mean = {mean}");
    println!("min = {}", sorted[0]);
    println!("p25 = {}", quantile(&sorted, 0.25));
    println!("median = {}", quantile(&sorted, 0.5));
    println!("p75 = {}", quantile(&sorted, 0.75));
    println!("max = {}", sorted[sorted.len() - 1]);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantile_interpolates() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(quantile(&xs, 0.0), 1.0);
        assert_eq!(quantile(&xs, 1.0), 4.0);
        assert_eq!(quantile(&xs, 0.5), 2.5);
    }

    #[test]
    fn suffix_builds_sibling_paths() {
        let p = PathBuf::from("reports/run");
        assert_eq!(suffixed(&p, "-seed1.txt"), PathBuf::from("reports/run-seed1.txt"));
    }
}
