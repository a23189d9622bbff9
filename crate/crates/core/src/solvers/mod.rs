//! Newton, Gauss–Newton and their deflated variants, plus the outer loop that
//! deflates each solution found and restarts.

mod config;
mod deflation_loop;
mod gauss_newton;
mod line_search;
mod newton;
mod solution_set;
mod trace;

use alloc::format;
use alloc::vec::Vec;

pub use config::{LineSearchConfig, SolverConfig};
pub use deflation_loop::{
    deflation_loop, deflation_loop_with, FailurePolicy, LoopOptions, LoopOutcome, Method,
    RoundRecord, UnknownMethod,
};
pub use gauss_newton::{bad_deflated_gn, gauss_newton, good_deflated_gn};
pub use line_search::{
    armijo_holds, quadratic_line_search, LineSearchFailure, LineSearchStep, ARMIJO_ROUNDING_SLACK,
};
pub use newton::{deflated_newton_opt, deflated_newton_root, newton_root};
pub use solution_set::{dedupe, Solution, SolutionSet, DEFAULT_DEDUPE_TOL};
pub use trace::{BadStep, Branch, IterationRecord, SolveResult, SolveStatus};

use crate::deflation::DeflationError;
use crate::numerics::{DenseMatrix, NumericsError};
use crate::problem::{Problem, ProblemError};

/// `|β|` below this makes the deflated step undefined.
pub const BETA_FLOOR: f64 = 1e-14;
/// `ω` below this makes the bad deflated step undefined.
pub const OMEGA_FLOOR: f64 = 1e-28;

/// A solver was called on a problem it cannot handle.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolverError {
    #[error("{method} needs a square system, got {rows} residuals and {cols} unknowns")]
    NotSquare {
        method: &'static str,
        rows: usize,
        cols: usize,
    },
    #[error("{0} needs residual Hessians, which this problem does not provide")]
    MissingHessians(&'static str),
    #[error("{0} is only implemented for real problems")]
    RealOnly(&'static str),
    #[error("initial guess has {found} entries, expected {expected}")]
    Dimension { expected: usize, found: usize },
    #[error("invalid solver config: {0}")]
    InvalidConfig(&'static str),
}

/// Counts evaluations while forwarding to the problem.
struct Counted<'a, P: ?Sized> {
    problem: &'a P,
    residual_evals: usize,
    jacobian_evals: usize,
    hessian_evals: usize,
}

impl<'a, P: Problem + ?Sized> Counted<'a, P> {
    fn new(problem: &'a P) -> Self {
        Self {
            problem,
            residual_evals: 0,
            jacobian_evals: 0,
            hessian_evals: 0,
        }
    }

    fn residual(&mut self, x: &[P::Scalar]) -> Result<Vec<P::Scalar>, ProblemError> {
        self.residual_evals += 1;
        self.problem.residual(x)
    }

    fn jacobian(&mut self, x: &[P::Scalar]) -> Result<DenseMatrix<P::Scalar>, ProblemError> {
        self.jacobian_evals += 1;
        self.problem.jacobian(x)
    }

    fn hessians(&mut self, x: &[P::Scalar]) -> Option<Result<Vec<DenseMatrix<P::Scalar>>, ProblemError>> {
        self.hessian_evals += 1;
        self.problem.residual_hessians(x)
    }

    fn finish(
        self,
        status: SolveStatus,
        x: Vec<P::Scalar>,
        trace: Vec<IterationRecord<P::Scalar>>,
        message: Option<alloc::string::String>,
    ) -> SolveResult<P::Scalar> {
        SolveResult {
            status,
            x,
            trace,
            residual_evals: self.residual_evals,
            jacobian_evals: self.jacobian_evals,
            hessian_evals: self.hessian_evals,
            message,
        }
    }
}

fn problem_failure(e: &ProblemError) -> (SolveStatus, alloc::string::String) {
    let status = match e {
        ProblemError::Numerics(NumericsError::RankDeficient { .. }) => SolveStatus::RankDeficient,
        _ => SolveStatus::EvaluationFailed,
    };
    (status, format!("{e}"))
}

fn numerics_failure(e: &NumericsError) -> (SolveStatus, alloc::string::String) {
    let status = match e {
        NumericsError::RankDeficient { .. }
        | NumericsError::Singular
        | NumericsError::NotTall { .. } => {
            SolveStatus::RankDeficient
        }
        _ => SolveStatus::EvaluationFailed,
    };
    (status, format!("{e}"))
}

fn deflation_failure(e: &DeflationError) -> (SolveStatus, alloc::string::String) {
    (SolveStatus::EvaluationFailed, format!("{e}"))
}

fn check_start<P: Problem + ?Sized>(
    problem: &P,
    x0: &[P::Scalar],
    config: &SolverConfig,
) -> Result<(), SolverError> {
    config.validate()?;
    if x0.len() != problem.num_params() {
        return Err(SolverError::Dimension {
            expected: problem.num_params(),
            found: x0.len(),
        });
    }
    Ok(())
}
