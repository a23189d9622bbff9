use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use deflsq::{
    compare_methods, emit_beta_field, run_experiment, ExperimentConfig, MethodKind, ProblemKind,
    OUTPUT_ROOT_ENV,
};

#[derive(Parser)]
#[command(name = "deflsq", version, about = "Deflated Newton and Gauss-Newton experiments")]
struct Cli {
    /// Directory that relative output paths are resolved against.
    #[arg(long, global = true, env = OUTPUT_ROOT_ENV, default_value = deflsq::config::DEFAULT_OUTPUT_ROOT)]
    output_root: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Overrides {
    /// Override a config key, e.g. `--set rounds=42 --set x0=[1;3]`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,

    /// Output directory (overrides `output_dir`).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write report.json, traces and exports.
    Run {
        config: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Run several configs on one problem and write comparison.csv.
    Compare {
        #[arg(required = true, num_args = 2..)]
        configs: Vec<PathBuf>,
        #[command(flatten)]
        overrides: Overrides,
        /// Run members concurrently.
        #[arg(long)]
        parallel: bool,
    },
    /// Write the beta field of a 2-parameter problem on a grid.
    BetaField {
        config: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    ListProblems,
    ListMethods,
}

fn load(path: &PathBuf, overrides: &Overrides) -> anyhow::Result<ExperimentConfig> {
    let mut config = ExperimentConfig::load(path, &overrides.set)
        .with_context(|| format!("loading {}", path.display()))?;
    if let Some(dir) = &overrides.output {
        config.output_dir = Some(dir.clone());
    }
    Ok(config)
}

fn main() -> anyhow::Result<ExitCode> {
    let cli = Cli::parse();
    let root = cli.output_root;
    match cli.command {
        Command::Run { config, overrides } => {
            let config = load(&config, &overrides)?;
            let report = run_experiment(&config, &root)?;
            let dir = config.resolved_output_dir(&root);
            println!(
                "{} {} on {}: {} solutions from {} rounds, {} residual evals, {:.3}s -> {}",
                report.problem.name,
                config.method,
                report.problem.signature,
                report.solutions.len(),
                report.rounds.len(),
                report.totals.residual_evals,
                report.wall_time_s,
                dir.display()
            );
            for r in report.rounds.iter().filter(|r| r.status.as_str() != "converged") {
                eprintln!(
                    "round {}: {}{}",
                    r.round,
                    r.status,
                    r.message.as_deref().map(|m| format!(" ({m})")).unwrap_or_default()
                );
            }
            Ok(if report.succeeded() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }
        Command::Compare {
            configs,
            overrides,
            parallel,
        } => {
            let loaded = configs
                .iter()
                .map(|p| {
                    ExperimentConfig::load(p, &overrides.set)
                        .with_context(|| format!("loading {}", p.display()))
                })
                .collect::<anyhow::Result<Vec<_>>>()?;
            let out = overrides.output.clone().map_or_else(
                || root.join(format!("compare-{}", loaded[0].problem)),
                |dir| if dir.is_absolute() { dir } else { root.join(dir) },
            );
            let parallel = parallel || loaded.iter().any(|c| c.parallel);
            let cmp = compare_methods(&loaded, &root, &out, parallel)?;
            for (label, report) in cmp.labels.iter().zip(&cmp.reports) {
                println!(
                    "{label}: {} solutions, {} residual evals, {} iterations",
                    report.solutions.len(),
                    report.totals.residual_evals,
                    report.totals.iterations
                );
            }
            println!("-> {}", cmp.csv_path.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::BetaField { config, overrides } => {
            let config = load(&config, &overrides)?;
            let out = emit_beta_field(&config, &root)?;
            let c = out.counts;
            println!(
                "{} deflated points, epsilon {}: green {}, yellow {}, red {} ({} components), undefined {} -> {}",
                out.deflated.len(),
                out.epsilon,
                c.green,
                c.yellow,
                c.red,
                out.red_components,
                c.undefined,
                out.csv_path.display()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::ListProblems => {
            for p in ProblemKind::ALL {
                println!("{:<12} {:<48} {}", p.name(), p.parameters(), p.description());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::ListMethods => {
            for m in MethodKind::all() {
                println!("{:<16} {}", m.name(), m.description());
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
