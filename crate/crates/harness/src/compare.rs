//! Running several configs on one problem and aligning their discoveries.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use crate::config::ExperimentConfig;
use crate::error::HarnessError;
use crate::output::CsvFile;
use crate::registry::ProblemInstance;
use crate::report::RunReport;
use crate::run::run_experiment;

pub struct Comparison {
    /// Unique label per member, in config order.
    pub labels: Vec<String>,
    pub reports: Vec<RunReport>,
    pub csv_path: PathBuf,
}

/// Runs every config (each into its own output directory) and writes
/// `comparison.csv` into `out_dir`, one row per (member, discovery).
pub fn compare_methods(
    configs: &[ExperimentConfig],
    root: &Path,
    out_dir: &Path,
    parallel: bool,
) -> Result<Comparison, HarnessError> {
    if configs.len() < 2 {
        return Err(HarnessError::Config(
            "compare needs at least two configs".into(),
        ));
    }
    for c in configs {
        c.validate()?;
    }
    let signature = ProblemInstance::signature(&configs[0]);
    if let Some(other) = configs
        .iter()
        .map(ProblemInstance::signature)
        .find(|s| *s != signature)
    {
        return Err(HarnessError::Config(format!(
            "compared configs must share one problem; got {signature} and {other}"
        )));
    }
    let out_dir = &std::path::absolute(out_dir).map_err(|source| HarnessError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let labels = unique_labels(configs);
    let members: Vec<ExperimentConfig> = configs
        .iter()
        .zip(&labels)
        .map(|(c, label)| {
            let mut c = c.clone();
            if c.output_dir.is_none() {
                c.output_dir = Some(out_dir.join(label));
            }
            c
        })
        .collect();

    let reports: Vec<RunReport> = if parallel {
        std::thread::scope(|s| {
            let handles: Vec<_> = members
                .iter()
                .map(|c| s.spawn(move || run_experiment(c, root)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("comparison member panicked"))
                .collect::<Result<_, _>>()
        })?
    } else {
        members
            .iter()
            .map(|c| run_experiment(c, root))
            .collect::<Result<_, _>>()?
    };

    std::fs::create_dir_all(out_dir).map_err(|source| HarnessError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let csv_path = out_dir.join("comparison.csv");
    write_comparison(&csv_path, &labels, &reports)?;
    Ok(Comparison {
        labels,
        reports,
        csv_path,
    })
}

fn unique_labels(configs: &[ExperimentConfig]) -> Vec<String> {
    let mut counts: HashMap<String, usize> = HashMap::new();
    for c in configs {
        *counts.entry(c.label()).or_default() += 1;
    }
    let mut seen: HashMap<String, usize> = HashMap::new();
    configs
        .iter()
        .map(|c| {
            let base = c.label();
            if counts[&base] == 1 {
                base
            } else {
                let k = seen.entry(base.clone()).or_default();
                *k += 1;
                format!("{base}-{k}")
            }
        })
        .collect()
}

fn write_comparison(path: &Path, labels: &[String], reports: &[RunReport]) -> Result<(), HarnessError> {
    let header: Vec<String> = [
        "label",
        "method",
        "discovery",
        "source",
        "iterations",
        "cumulative_residual_evals",
        "cumulative_jacobian_evals",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let mut out = CsvFile::create(path, &header)?;
    for (label, report) in labels.iter().zip(reports) {
        for d in &report.discoveries {
            out.row(&[
                label.clone(),
                report.config.method.clone(),
                d.discovery.to_string(),
                d.source.to_string(),
                d.iterations.to_string(),
                d.cumulative_residual_evals.to_string(),
                d.cumulative_jacobian_evals.to_string(),
            ])?;
        }
    }
    out.finish()
}
