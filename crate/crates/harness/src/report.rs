//! The `report.json` document written for every run.
//!
//! Schema `deflsq-run/1`:
//!
//! | key | type |
//! |-----|------|
//! | `schema` | `"deflsq-run/1"` |
//! | `config` | the experiment config, every key resolved |
//! | `problem` | `{name, signature, field, num_params, num_residuals}` |
//! | `rounds` | one [`RoundSummary`] per deflation round or multistart start |
//! | `solutions` | distinct solutions, [`SolutionSummary`] |
//! | `discoveries` | cumulative evaluation counts when each solution appeared |
//! | `totals` | evaluation and iteration totals |
//! | `wall_time_s` | seconds |

use std::path::Path;

use deflsq_core::prelude::*;
use deflsq_core::solvers::Solution;
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::error::HarnessError;

pub const RUN_SCHEMA: &str = "deflsq-run/1";

/// A point: real coordinates, or `[re, im]` pairs for complex problems.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coordinates {
    Real(Vec<f64>),
    Complex(Vec<[f64; 2]>),
}

/// Scalars the harness knows how to write out.
pub trait ExportScalar: Scalar {
    fn coordinates(x: &[Self]) -> Coordinates;
}

impl ExportScalar for f64 {
    fn coordinates(x: &[f64]) -> Coordinates {
        Coordinates::Real(x.to_vec())
    }
}

impl ExportScalar for Complex64 {
    fn coordinates(x: &[Complex64]) -> Coordinates {
        Coordinates::Complex(x.iter().map(|z| [z.re, z.im]).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemSummary {
    pub name: String,
    pub signature: String,
    pub field: Field,
    pub num_params: usize,
    pub num_residuals: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundSummary {
    pub round: usize,
    pub status: SolveStatus,
    pub iterations: usize,
    pub residual_evals: usize,
    pub jacobian_evals: usize,
    pub hessian_evals: usize,
    /// `f` at the terminal iterate.
    pub objective: Option<f64>,
    pub grad_norm: Option<f64>,
    pub solution_index: Option<usize>,
    pub min_distance_to_deflated: Option<f64>,
    pub message: Option<String>,
}

impl RoundSummary {
    pub fn from_result<S: Scalar>(
        round: usize,
        result: &SolveResult<S>,
        solution_index: Option<usize>,
        min_distance_to_deflated: Option<f64>,
    ) -> Self {
        let last = result.last();
        Self {
            round,
            status: result.status,
            iterations: result.iterations(),
            residual_evals: result.residual_evals,
            jacobian_evals: result.jacobian_evals,
            hessian_evals: result.hessian_evals,
            objective: last.map(|r| r.objective),
            grad_norm: last.map(|r| r.grad_norm),
            solution_index,
            min_distance_to_deflated,
            message: result.message.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionSummary {
    pub index: usize,
    pub x: Coordinates,
    pub residual_norm: f64,
    pub objective: f64,
    pub grad_norm: f64,
    /// Round or start that found it.
    pub source: usize,
    pub iterations: usize,
}

impl SolutionSummary {
    pub fn from_solution<S: ExportScalar>(index: usize, s: &Solution<S>) -> Self {
        Self {
            index,
            x: S::coordinates(&s.x),
            residual_norm: s.residual_norm,
            objective: s.objective,
            grad_norm: s.grad_norm,
            source: s.source,
            iterations: s.iterations,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscoveryRow {
    /// 1-based count of distinct solutions after this discovery.
    pub discovery: usize,
    pub source: usize,
    pub iterations: usize,
    pub cumulative_residual_evals: usize,
    pub cumulative_jacobian_evals: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Totals {
    pub residual_evals: usize,
    pub jacobian_evals: usize,
    pub hessian_evals: usize,
    pub iterations: usize,
    pub converged_rounds: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: String,
    pub config: ExperimentConfig,
    pub problem: ProblemSummary,
    pub rounds: Vec<RoundSummary>,
    pub solutions: Vec<SolutionSummary>,
    pub discoveries: Vec<DiscoveryRow>,
    pub totals: Totals,
    pub wall_time_s: f64,
}

impl RunReport {
    pub fn read(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let report: Self = serde_json::from_str(&text)?;
        if report.schema != RUN_SCHEMA {
            return Err(HarnessError::Config(format!(
                "{}: unsupported schema `{}`",
                path.display(),
                report.schema
            )));
        }
        Ok(report)
    }

    pub fn write(&self, path: &Path) -> Result<(), HarnessError> {
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(path, text + "\n").map_err(|source| HarnessError::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    /// A run succeeds when at least one round converged.
    pub fn succeeded(&self) -> bool {
        self.totals.converged_rounds > 0
    }
}
