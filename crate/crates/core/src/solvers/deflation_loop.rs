use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use super::{
    bad_deflated_gn, deflated_newton_opt, deflated_newton_root, gauss_newton, good_deflated_gn,
    newton_root, Solution, SolutionSet, SolveResult, SolverConfig, SolverError,
    DEFAULT_DEDUPE_TOL,
};
use crate::deflation::DeflationState;
use crate::problem::Problem;

/// The registered iterative methods.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Method {
    /// Undeflated Newton rootfinding.
    Newton,
    DeflatedNewton,
    /// Deflated Newton for optimization (needs residual Hessians).
    NewtonOpt,
    /// Undeflated line-searched Gauss–Newton.
    GaussNewton,
    GoodGn,
    BadGn,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Newton,
        Method::DeflatedNewton,
        Method::NewtonOpt,
        Method::GaussNewton,
        Method::GoodGn,
        Method::BadGn,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Newton => "newton",
            Method::DeflatedNewton => "deflated-newton",
            Method::NewtonOpt => "newton-opt",
            Method::GaussNewton => "gauss-newton",
            Method::GoodGn => "good-gn",
            Method::BadGn => "bad-gn",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Method::Newton => "Newton rootfinding for square systems",
            Method::DeflatedNewton => "Newton rootfinding with beta-scaled deflated steps",
            Method::NewtonOpt => "Newton on grad f with beta-scaled steps; finds all stationary points",
            Method::GaussNewton => "line-searched Gauss-Newton, no deflation",
            Method::GoodGn => "deflated Gauss-Newton taking p/beta on the deflated branch",
            Method::BadGn => "deflated Gauss-Newton applied to mu*r, rank-one corrected step",
        }
    }

    pub fn uses_deflation(self) -> bool {
        !matches!(self, Method::Newton | Method::GaussNewton)
    }

    pub fn solve<P: Problem + ?Sized>(
        self,
        problem: &P,
        x0: &[P::Scalar],
        config: &SolverConfig,
        state: &DeflationState<P::Scalar>,
    ) -> Result<SolveResult<P::Scalar>, SolverError> {
        match self {
            Method::Newton => newton_root(problem, x0, config),
            Method::DeflatedNewton => deflated_newton_root(problem, x0, config, state),
            Method::NewtonOpt => deflated_newton_opt(problem, x0, config, state),
            Method::GaussNewton => gauss_newton(problem, x0, config),
            Method::GoodGn => good_deflated_gn(problem, x0, config, state),
            Method::BadGn => bad_deflated_gn(problem, x0, config, state),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown method `{0}`")]
pub struct UnknownMethod(pub String);

impl FromStr for Method {
    type Err = UnknownMethod;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| UnknownMethod(s.into()))
    }
}

/// What to do after a round that does not converge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum FailurePolicy {
    #[default]
    Stop,
    /// Keep going; only useful with per-round starting points.
    Continue,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoopOptions {
    pub on_failure: FailurePolicy,
    pub dedupe_tol: f64,
}

impl Default for LoopOptions {
    fn default() -> Self {
        Self {
            on_failure: FailurePolicy::Stop,
            dedupe_tol: DEFAULT_DEDUPE_TOL,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RoundRecord<S> {
    pub round: usize,
    pub x0: Vec<S>,
    pub result: SolveResult<S>,
    /// Index in the solution set if the round found a new solution.
    pub solution_index: Option<usize>,
    /// Smallest metric distance from the result to a previously deflated point.
    pub min_distance_to_deflated: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct LoopOutcome<S> {
    pub rounds: Vec<RoundRecord<S>>,
    pub solutions: SolutionSet<S>,
    /// Deflation state after the last round, for continuing elsewhere.
    pub state: DeflationState<S>,
}

impl<S> LoopOutcome<S> {
    pub fn residual_evals(&self) -> usize {
        self.rounds.iter().map(|r| r.result.residual_evals).sum()
    }

    pub fn jacobian_evals(&self) -> usize {
        self.rounds.iter().map(|r| r.result.jacobian_evals).sum()
    }

    pub fn iterations(&self) -> usize {
        self.rounds.iter().map(|r| r.result.iterations()).sum()
    }
}

/// Solve, deflate the solution, and restart from the same `x0`, for up to
/// `rounds` rounds.
pub fn deflation_loop<P: Problem + ?Sized>(
    method: Method,
    problem: &P,
    x0: &[P::Scalar],
    rounds: usize,
    config: &SolverConfig,
    state: DeflationState<P::Scalar>,
    options: &LoopOptions,
) -> Result<LoopOutcome<P::Scalar>, SolverError> {
    deflation_loop_with(method, problem, rounds, config, state, options, |_, _| x0.to_vec())
}

/// As [`deflation_loop`], with the starting point of each round chosen by
/// `x0_for_round(round, solutions_so_far)`.
pub fn deflation_loop_with<P, F>(
    method: Method,
    problem: &P,
    rounds: usize,
    config: &SolverConfig,
    mut state: DeflationState<P::Scalar>,
    options: &LoopOptions,
    mut x0_for_round: F,
) -> Result<LoopOutcome<P::Scalar>, SolverError>
where
    P: Problem + ?Sized,
    F: FnMut(usize, &SolutionSet<P::Scalar>) -> Vec<P::Scalar>,
{
    config.validate()?;
    let mut solutions = SolutionSet::new(options.dedupe_tol);
    let mut records = Vec::new();
    let metric = state.metric().clone();

    for round in 0..rounds {
        let x0 = x0_for_round(round, &solutions);
        let result = method.solve(problem, &x0, config, &state)?;
        let mut record = RoundRecord {
            round,
            x0,
            solution_index: None,
            min_distance_to_deflated: None,
            result,
        };
        if record.result.converged() {
            let x = record.result.x.clone();
            record.min_distance_to_deflated = state
                .points()
                .iter()
                .map(|y| metric.distance(&x, y))
                .reduce(f64::min);
            let last = record.result.last().expect("converged runs have a trace");
            let solution = Solution {
                x: x.clone(),
                residual_norm: last.residual_norm,
                objective: last.objective,
                grad_norm: last.grad_norm,
                source: round,
                iterations: record.result.iterations(),
                residual_evals: record.result.residual_evals,
                jacobian_evals: record.result.jacobian_evals,
            };
            record.solution_index = solutions.insert(solution, metric.as_ref());
            // A deflated point can only be hit exactly by a broken solver; keep
            // the loop alive and report it through the round record instead.
            let _ = state.push(x);
            records.push(record);
        } else {
            records.push(record);
            if options.on_failure == FailurePolicy::Stop {
                break;
            }
        }
    }
    Ok(LoopOutcome {
        rounds: records,
        solutions,
        state,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!("newton-raphson".parse::<Method>().is_err());
    }
}
