//! Random-restart baseline: line-searched Gauss–Newton from uniform random
//! starts in a box, with evaluation counts recorded at each new discovery.

use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::deflation::Euclidean;
use crate::problem::Problem;
use crate::solvers::{
    gauss_newton, Solution, SolutionSet, SolveStatus, SolverConfig, SolverError,
    DEFAULT_DEDUPE_TOL,
};

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MultistartConfig {
    pub bounds: Vec<(f64, f64)>,
    pub n_starts: usize,
    pub seed: u64,
    pub solver: SolverConfig,
    pub dedupe_tol: f64,
}

impl MultistartConfig {
    pub fn new(bounds: Vec<(f64, f64)>, n_starts: usize, seed: u64) -> Self {
        Self {
            bounds,
            n_starts,
            seed,
            solver: SolverConfig::default(),
            dedupe_tol: DEFAULT_DEDUPE_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MultistartError {
    #[error("bounds must be {expected} finite intervals with lo < hi")]
    Bounds { expected: usize },
    #[error("n_starts must be at least 1")]
    NoStarts,
    #[error(transparent)]
    Solver(#[from] SolverError),
}

/// Cumulative cost at the moment the `index`-th distinct minimum appeared.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Discovery {
    pub index: usize,
    pub start: usize,
    pub cumulative_residual_evals: usize,
    pub cumulative_jacobian_evals: usize,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StartRecord {
    pub start: usize,
    pub x0: Vec<f64>,
    pub status: SolveStatus,
    pub x: Vec<f64>,
    pub iterations: usize,
    pub residual_evals: usize,
    pub jacobian_evals: usize,
    pub solution_index: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MultistartReport {
    pub solutions: SolutionSet<f64>,
    pub discoveries: Vec<Discovery>,
    pub starts: Vec<StartRecord>,
    pub residual_evals: usize,
    pub jacobian_evals: usize,
}

/// Start `index` for `seed`: uniform in the box, from its own ChaCha stream so
/// each start is independent of how many others are drawn.
pub fn sample_start(seed: u64, index: usize, bounds: &[(f64, f64)]) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    bounds
        .iter()
        .map(|&(lo, hi)| {
            let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
            lo + (hi - lo) * u
        })
        .collect()
}

/// Runs Gauss–Newton from `n_starts` random points in start-index order.
pub fn multistart<P: Problem<Scalar = f64> + ?Sized>(
    problem: &P,
    config: &MultistartConfig,
) -> Result<MultistartReport, MultistartError> {
    let ok_bounds = config.bounds.len() == problem.num_params()
        && config
            .bounds
            .iter()
            .all(|&(lo, hi)| lo.is_finite() && hi.is_finite() && lo < hi);
    if !ok_bounds {
        return Err(MultistartError::Bounds {
            expected: problem.num_params(),
        });
    }
    if config.n_starts == 0 {
        return Err(MultistartError::NoStarts);
    }

    let mut solutions = SolutionSet::new(config.dedupe_tol);
    let mut discoveries = Vec::new();
    let mut starts = Vec::with_capacity(config.n_starts);
    let (mut res_evals, mut jac_evals) = (0, 0);

    for start in 0..config.n_starts {
        let x0 = sample_start(config.seed, start, &config.bounds);
        let result = gauss_newton(problem, &x0, &config.solver)?;
        res_evals += result.residual_evals;
        jac_evals += result.jacobian_evals;
        let solution_index = match (result.converged(), result.last()) {
            (true, Some(last)) => solutions.insert(
                Solution {
                    x: result.x.clone(),
                    residual_norm: last.residual_norm,
                    objective: last.objective,
                    grad_norm: last.grad_norm,
                    source: start,
                    iterations: result.iterations(),
                    residual_evals: result.residual_evals,
                    jacobian_evals: result.jacobian_evals,
                },
                &Euclidean,
            ),
            _ => None,
        };
        if let Some(index) = solution_index {
            discoveries.push(Discovery {
                index,
                start,
                cumulative_residual_evals: res_evals,
                cumulative_jacobian_evals: jac_evals,
            });
        }
        starts.push(StartRecord {
            start,
            x0,
            status: result.status,
            iterations: result.iterations(),
            x: result.x,
            residual_evals: result.residual_evals,
            jacobian_evals: result.jacobian_evals,
            solution_index,
        });
    }

    Ok(MultistartReport {
        solutions,
        discoveries,
        starts,
        residual_evals: res_evals,
        jacobian_evals: jac_evals,
    })
}
