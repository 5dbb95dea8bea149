//! Experiment report rendering: plain text, stable key order, shortest
//! round-trip float formatting. Identical runs produce identical bytes.

use crate::experiment::{median, ExperimentReport};
use crate::scenario::ScenarioConfig;
use std::path::Path;

use super::atomic_write;
use crate::error::Result;

const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

fn push_scenario(out: &mut String, s: &ScenarioConfig) {
    out.push_str("[scenario]\n");
    out.push_str(&format!("dim = {}\n", s.dim));
    out.push_str(&format!("num_classes = {}\n", s.num_classes));
    out.push_str(&format!("train_per_class = {}\n", s.train_per_class));
    out.push_str(&format!("test_per_class = {}\n", s.test_per_class));
    out.push_str(&format!("text_noise_sigma = {}\n", s.text_noise_sigma));
    out.push_str(&format!("image_noise_sigma = {}\n", s.image_noise_sigma));
    out.push_str(&format!("gap_magnitude = {}\n", s.gap_magnitude));
    out.push_str(&format!("seed = {}\n", s.seed));
}

/// The full single-run report: header, config echo, one result section per
/// injector, and the controller trajectory where one exists.
pub fn render_report(report: &ExperimentReport) -> String {
    let mut out = String::from("arcsin report v1\n");
    out.push_str(&format!("tool_version = {TOOL_VERSION}\n"));
    out.push_str(&format!("master_seed = {}\n", report.master_seed));
    out.push_str(&format!("train_fraction = {}\n\n", report.train_fraction));
    push_scenario(&mut out, &report.scenario);
    out.push_str("\n[training]\n");
    out.push_str(&format!("epochs = {}\n", report.training.epochs));
    out.push_str(&format!("learning_rate = {}\n", report.training.learning_rate));

    for r in &report.results {
        out.push_str(&format!("\n[result {}]\n", r.label));
        out.push_str(&format!("image_accuracy = {}\n", r.image_accuracy));
        out.push_str(&format!("text_accuracy = {}\n", r.text_accuracy));
        out.push_str(&format!("mean_train_similarity = {}\n", r.mean_train_similarity));
    }
    for r in &report.results {
        if let Some(trace) = &r.trace {
            out.push_str(&format!("\n[trace {}]\n", r.label));
            out.push_str("batch,alpha,avg_similarity,lower,upper\n");
            for rec in trace.records() {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    rec.batch, rec.alpha, rec.avg_similarity, rec.lower, rec.upper
                ));
            }
        }
    }
    out
}

pub fn write_report(report: &ExperimentReport, path: &Path) -> Result<()> {
    atomic_write(path, render_report(report).as_bytes())
}

/// Cross-seed medians, grouped by training fraction and injector label.
/// `reports` holds every run (each seed, each fraction), any order; grouping
/// preserves first-seen order so output is deterministic.
pub fn render_aggregate(reports: &[ExperimentReport]) -> String {
    let mut out = String::from("arcsin aggregate v1\n");
    out.push_str(&format!("tool_version = {TOOL_VERSION}\n"));

    let mut seeds: Vec<u64> = Vec::new();
    for r in reports {
        if !seeds.contains(&r.master_seed) {
            seeds.push(r.master_seed);
        }
    }
    let seed_list = seeds
        .iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()
        .join(",");
    out.push_str(&format!("seeds = {seed_list}\n"));
    out.push_str(&format!("runs = {}\n", reports.len()));

    let mut fractions: Vec<f64> = Vec::new();
    for r in reports {
        if !fractions.iter().any(|f| f == &r.train_fraction) {
            fractions.push(r.train_fraction);
        }
    }

    for fraction in fractions {
        let group: Vec<&ExperimentReport> = reports
            .iter()
            .filter(|r| r.train_fraction == fraction)
            .collect();
        let mut labels: Vec<&str> = Vec::new();
        for r in &group {
            for res in &r.results {
                if !labels.contains(&res.label.as_str()) {
                    labels.push(&res.label);
                }
            }
        }
        for label in labels {
            let image: Vec<f64> = group
                .iter()
                .flat_map(|r| r.results.iter())
                .filter(|res| res.label == label)
                .map(|res| res.image_accuracy)
                .collect();
            let text: Vec<f64> = group
                .iter()
                .flat_map(|r| r.results.iter())
                .filter(|res| res.label == label)
                .map(|res| res.text_accuracy)
                .collect();
            out.push_str(&format!("\n[aggregate fraction={fraction} injector={label}]\n"));
            out.push_str(&format!("median_image_accuracy = {}\n", median(&image)));
            out.push_str(&format!("median_text_accuracy = {}\n", median(&text)));
        }
    }
    out
}

pub fn write_aggregate(reports: &[ExperimentReport], path: &Path) -> Result<()> {
    atomic_write(path, render_aggregate(reports).as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::{run_experiment, ExperimentConfig, InjectorSpec};
    use crate::injector::InjectorConfig;
    use crate::probe::TrainOptions;

    fn tiny_report(seed: u64) -> ExperimentReport {
        let cfg = ExperimentConfig {
            scenario: ScenarioConfig {
                dim: 8,
                num_classes: 3,
                train_per_class: 10,
                test_per_class: 10,
                ..ScenarioConfig::default()
            },
            injectors: vec![
                InjectorSpec::Identity,
                InjectorSpec::ArcSin {
                    config: InjectorConfig::default(),
                },
            ],
            training: TrainOptions {
                epochs: 10,
                learning_rate: 0.1,
            },
            master_seed: seed,
        };
        run_experiment(&cfg).unwrap()
    }

    #[test]
    fn rendering_is_byte_deterministic() {
        let a = render_report(&tiny_report(3));
        let b = render_report(&tiny_report(3));
        assert_eq!(a, b);
    }

    #[test]
    fn report_contains_every_field() {
        let report = tiny_report(4);
        let text = render_report(&report);
        for needle in [
            "arcsin report v1",
            "tool_version = ",
            "master_seed = 4",
            "[scenario]",
            "[training]",
            "[result identity]",
            "[result arcsin]",
            "image_accuracy = ",
            "text_accuracy = ",
            "mean_train_similarity = ",
            "[trace arcsin]",
            "batch,alpha,avg_similarity,lower,upper",
        ] {
            assert!(text.contains(needle), "missing '{needle}' in:\n{text}");
        }
        // one trace line per epoch
        let trace_lines = text
            .lines()
            .skip_while(|l| !l.starts_with("[trace"))
            .skip(2)
            .take_while(|l| !l.is_empty())
            .count();
        assert_eq!(trace_lines, 10);
    }

    #[test]
    fn aggregate_medians_across_seeds() {
        let reports = vec![tiny_report(1), tiny_report(2), tiny_report(3)];
        let text = render_aggregate(&reports);
        assert!(text.contains("seeds = 1,2,3"));
        assert!(text.contains("[aggregate fraction=1 injector=identity]"));
        assert!(text.contains("[aggregate fraction=1 injector=arcsin]"));

        let image_accs: Vec<f64> = reports
            .iter()
            .map(|r| r.results[0].image_accuracy)
            .collect();
        let expected = median(&image_accs);
        let line = text
            .lines()
            .skip_while(|l| !l.contains("injector=identity"))
            .find(|l| l.starts_with("median_image_accuracy"))
            .unwrap();
        assert_eq!(line, format!("median_image_accuracy = {expected}"));
    }

    #[test]
    fn write_report_round_trips_bytes() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("report.txt");
        let report = tiny_report(5);
        write_report(&report, &path).unwrap();
        let on_disk = std::fs::read_to_string(&path).unwrap();
        assert_eq!(on_disk, render_report(&report));
    }
}
