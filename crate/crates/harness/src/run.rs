//! Running one configured experiment and persisting its outputs.

use std::path::Path;
use std::time::Instant;

use deflsq_core::multistart::{multistart, MultistartConfig, MultistartReport};
use deflsq_core::prelude::*;

use crate::config::ExperimentConfig;
use crate::error::HarnessError;
use crate::output;
use crate::registry::{bvp_initial_guess, real_initial_guess, MethodKind, ProblemInstance};
use crate::report::{
    DiscoveryRow, ExportScalar, ProblemSummary, RoundSummary, RunReport, SolutionSummary, Totals,
    RUN_SCHEMA,
};

/// A finished experiment, before anything is written.
pub struct Execution {
    pub report: RunReport,
    artifacts: Artifacts,
}

enum Artifacts {
    Real {
        outcome: LoopOutcome<f64>,
        num_params: usize,
    },
    Bvp {
        outcome: LoopOutcome<Complex64>,
        problem: BvpProblem,
    },
    Multistart(MultistartReport),
}

/// Runs `config` and writes its outputs under the resolved output directory.
pub fn run_experiment(config: &ExperimentConfig, root: &Path) -> Result<RunReport, HarnessError> {
    let dir = config.resolved_output_dir(root);
    let exec = execute(config)?;
    exec.write(&dir)?;
    Ok(exec.report)
}

pub fn execute(config: &ExperimentConfig) -> Result<Execution, HarnessError> {
    config.validate()?;
    let instance = ProblemInstance::build(config)?;
    let kind = config.problem_kind()?;
    let started = Instant::now();
    let (summary, artifacts) = match (&instance, config.method_kind()?) {
        (ProblemInstance::Bvp(p), MethodKind::Multistart) => {
            return Err(HarnessError::Config(format!(
                "multistart needs a real problem; {} is complex",
                p.name()
            )))
        }
        (ProblemInstance::Bvp(p), MethodKind::Solver(method)) => {
            let x0 = bvp_initial_guess(p, config.x0.as_ref())?;
            let outcome = run_loop(method, p, &x0, config)?;
            (
                problem_summary(p, config),
                Artifacts::Bvp {
                    outcome,
                    problem: p.clone(),
                },
            )
        }
        (real, method) => {
            let problem: &dyn Problem<Scalar = f64> = match real {
                ProblemInstance::Himmelblau(p) => p,
                ProblemInstance::FTrig(p) => p,
                ProblemInstance::Iep(p) => p,
                ProblemInstance::Bvp(_) => unreachable!("handled above"),
            };
            let summary = problem_summary(problem, config);
            match method {
                MethodKind::Solver(method) => {
                    let x0 = real_initial_guess(kind, config.x0.as_ref(), problem.num_params())?;
                    let outcome = run_loop(method, problem, &x0, config)?;
                    (
                        summary,
                        Artifacts::Real {
                            outcome,
                            num_params: problem.num_params(),
                        },
                    )
                }
                MethodKind::Multistart => {
                    let bounds = sampling_box(problem, config)?;
                    let ms = MultistartConfig {
                        bounds,
                        n_starts: config.n_starts,
                        seed: config.seed,
                        solver: config.solver_config(),
                        dedupe_tol: config.dedupe_tol,
                    };
                    (summary, Artifacts::Multistart(multistart(problem, &ms)?))
                }
            }
        }
    };
    let wall_time_s = started.elapsed().as_secs_f64();

    let (rounds, solutions, discoveries, totals) = match &artifacts {
        Artifacts::Real { outcome, .. } => loop_tables(outcome),
        Artifacts::Bvp { outcome, .. } => loop_tables(outcome),
        Artifacts::Multistart(ms) => multistart_tables(ms),
    };
    Ok(Execution {
        report: RunReport {
            schema: RUN_SCHEMA.into(),
            config: config.clone(),
            problem: summary,
            rounds,
            solutions,
            discoveries,
            totals,
            wall_time_s,
        },
        artifacts,
    })
}

impl Execution {
    /// Writes `report.json`, `solutions.csv`, `discoveries.csv` and the
    /// method-specific files into `dir`.
    pub fn write(&self, dir: &Path) -> Result<(), HarnessError> {
        std::fs::create_dir_all(dir).map_err(|source| HarnessError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        self.report.write(&dir.join("report.json"))?;
        output::write_solutions(&dir.join("solutions.csv"), &self.report.solutions)?;
        output::write_discoveries(&dir.join("discoveries.csv"), &self.report.discoveries)?;
        match &self.artifacts {
            Artifacts::Real {
                outcome,
                num_params,
            } => write_traces(dir, outcome, *num_params),
            Artifacts::Bvp { outcome, problem } => {
                write_traces(dir, outcome, problem.num_params())?;
                for (k, s) in outcome.solutions.iter().enumerate() {
                    output::write_bvp_grid(&dir.join(format!("solution_{k}_grid.csv")), problem, &s.x)?;
                }
                Ok(())
            }
            Artifacts::Multistart(ms) => output::write_starts(&dir.join("starts.csv"), &ms.starts),
        }
    }

    /// Distinct solutions of a real problem, in discovery order.
    pub fn real_solutions(&self) -> Option<Vec<Vec<f64>>> {
        match &self.artifacts {
            Artifacts::Real { outcome, .. } => Some(outcome.solutions.points()),
            Artifacts::Multistart(ms) => Some(ms.solutions.points()),
            Artifacts::Bvp { .. } => None,
        }
    }

    /// The deflation-loop rounds of a real problem.
    pub fn real_rounds(&self) -> Option<&[deflsq_core::solvers::RoundRecord<f64>]> {
        match &self.artifacts {
            Artifacts::Real { outcome, .. } => Some(&outcome.rounds),
            _ => None,
        }
    }
}

fn run_loop<P: Problem + ?Sized>(
    method: Method,
    problem: &P,
    x0: &[P::Scalar],
    config: &ExperimentConfig,
) -> Result<LoopOutcome<P::Scalar>, HarnessError> {
    let state = DeflationState::for_problem(problem, config.deflation_config());
    Ok(deflation_loop(
        method,
        problem,
        x0,
        config.rounds,
        &config.solver_config(),
        state,
        &config.loop_options(),
    )?)
}

fn problem_summary<P: Problem + ?Sized>(problem: &P, config: &ExperimentConfig) -> ProblemSummary {
    ProblemSummary {
        name: problem.name().to_string(),
        signature: ProblemInstance::signature(config),
        field: problem.field(),
        num_params: problem.num_params(),
        num_residuals: problem.num_residuals(),
    }
}

fn sampling_box(
    problem: &dyn Problem<Scalar = f64>,
    config: &ExperimentConfig,
) -> Result<Vec<(f64, f64)>, HarnessError> {
    match (&config.bounds, problem.bounds()) {
        (Some(b), _) => Ok(b.iter().map(|&[lo, hi]| (lo, hi)).collect()),
        (None, Some(b)) => Ok(b),
        (None, None) => Err(HarnessError::Config(format!(
            "{} has no default box; set `bounds`",
            problem.name()
        ))),
    }
}

type Tables = (Vec<RoundSummary>, Vec<SolutionSummary>, Vec<DiscoveryRow>, Totals);

fn loop_tables<S: ExportScalar>(outcome: &LoopOutcome<S>) -> Tables {
    let mut totals = Totals::default();
    let mut discoveries = Vec::new();
    let rounds = outcome
        .rounds
        .iter()
        .map(|r| {
            totals.residual_evals += r.result.residual_evals;
            totals.jacobian_evals += r.result.jacobian_evals;
            totals.hessian_evals += r.result.hessian_evals;
            totals.iterations += r.result.iterations();
            if r.result.converged() {
                totals.converged_rounds += 1;
            }
            if let Some(index) = r.solution_index {
                discoveries.push(DiscoveryRow {
                    discovery: index + 1,
                    source: r.round,
                    iterations: r.result.iterations(),
                    cumulative_residual_evals: totals.residual_evals,
                    cumulative_jacobian_evals: totals.jacobian_evals,
                });
            }
            RoundSummary::from_result(r.round, &r.result, r.solution_index, r.min_distance_to_deflated)
        })
        .collect();
    let solutions = outcome
        .solutions
        .iter()
        .enumerate()
        .map(|(i, s)| SolutionSummary::from_solution(i, s))
        .collect();
    (rounds, solutions, discoveries, totals)
}

fn multistart_tables(ms: &MultistartReport) -> Tables {
    let mut totals = Totals {
        residual_evals: ms.residual_evals,
        jacobian_evals: ms.jacobian_evals,
        ..Totals::default()
    };
    let rounds = ms
        .starts
        .iter()
        .map(|s| {
            totals.iterations += s.iterations;
            if s.status == SolveStatus::Converged {
                totals.converged_rounds += 1;
            }
            RoundSummary {
                round: s.start,
                status: s.status,
                iterations: s.iterations,
                residual_evals: s.residual_evals,
                jacobian_evals: s.jacobian_evals,
                hessian_evals: 0,
                objective: None,
                grad_norm: None,
                solution_index: s.solution_index,
                min_distance_to_deflated: None,
                message: None,
            }
        })
        .collect();
    let discoveries = ms
        .discoveries
        .iter()
        .map(|d| DiscoveryRow {
            discovery: d.index + 1,
            source: d.start,
            iterations: ms.starts[d.start].iterations,
            cumulative_residual_evals: d.cumulative_residual_evals,
            cumulative_jacobian_evals: d.cumulative_jacobian_evals,
        })
        .collect();
    let solutions = ms
        .solutions
        .iter()
        .enumerate()
        .map(|(i, s)| SolutionSummary::from_solution(i, s))
        .collect();
    (rounds, solutions, discoveries, totals)
}

fn write_traces<S: ExportScalar>(
    dir: &Path,
    outcome: &LoopOutcome<S>,
    num_params: usize,
) -> Result<(), HarnessError> {
    for r in &outcome.rounds {
        output::write_trace(
            &dir.join(format!("trace_round_{}.csv", r.round)),
            &r.result.trace,
            num_params,
        )?;
    }
    Ok(())
}
