use alloc::vec::Vec;

use super::{
    check_start, deflation_failure, numerics_failure, problem_failure, Branch, Counted,
    IterationRecord, SolveResult, SolveStatus, SolverConfig, SolverError, BETA_FLOOR,
};
use crate::deflation::{DeflationConfig, DeflationState};
use crate::numerics::{qr_factorize, DenseMatrix, NumericsError};
use crate::problem::{gradient, objective, Problem};
use crate::scalar::{self, Field, Scalar};

/// Newton's method for `r(x) = 0`, stopping once `‖r‖ ≤ step_tol`.
pub fn newton_root<P: Problem + ?Sized>(
    problem: &P,
    x0: &[P::Scalar],
    config: &SolverConfig,
) -> Result<SolveResult<P::Scalar>, SolverError> {
    let empty = DeflationState::for_problem(problem, DeflationConfig::default());
    deflated_newton_root(problem, x0, config, &empty)
}

/// Deflated Newton: the Newton step `p` scaled by `β⁻¹`, `β = 1 − Re⟨∇η, p⟩`.
/// This is Newton's method applied to `μ(x)·r(x)`.
pub fn deflated_newton_root<P: Problem + ?Sized>(
    problem: &P,
    x0: &[P::Scalar],
    config: &SolverConfig,
    state: &DeflationState<P::Scalar>,
) -> Result<SolveResult<P::Scalar>, SolverError> {
    check_start(problem, x0, config)?;
    if problem.num_residuals() != problem.num_params() {
        return Err(SolverError::NotSquare {
            method: "newton",
            rows: problem.num_residuals(),
            cols: problem.num_params(),
        });
    }
    Ok(newton_iteration(problem, x0, config, state, |eval, x, r, j| {
        let _ = (eval, x);
        Ok(NewtonSystem {
            stop: scalar::norm(r),
            matrix: j.clone(),
            rhs: r.iter().map(|&v| -v).collect(),
        })
    }))
}

/// Newton for optimization: solves `H_f p = −∇f` with
/// `H_f = JᵀJ + Σ rᵢ·H_{rᵢ}`, scales by `β⁻¹`, and stops once
/// `‖∇f‖ ≤ step_tol`. It converges to stationary points of any kind and takes
/// no line search.
pub fn deflated_newton_opt<P: Problem + ?Sized>(
    problem: &P,
    x0: &[P::Scalar],
    config: &SolverConfig,
    state: &DeflationState<P::Scalar>,
) -> Result<SolveResult<P::Scalar>, SolverError> {
    check_start(problem, x0, config)?;
    if P::Scalar::FIELD != Field::Real {
        return Err(SolverError::RealOnly("newton-opt"));
    }
    if problem.residual_hessians(x0).is_none() {
        return Err(SolverError::MissingHessians("newton-opt"));
    }
    Ok(newton_iteration(problem, x0, config, state, |eval, x, r, j| {
        let hessians = eval
            .hessians(x)
            .expect("hessian availability checked at start")?;
        let g = gradient(j, r);
        let mut h = j.adjoint().matmul(j)?;
        for (ri, hi) in r.iter().zip(&hessians) {
            h = h.add_scaled(*ri, hi)?;
        }
        Ok(NewtonSystem {
            stop: scalar::norm(&g),
            matrix: h,
            rhs: g.iter().map(|&v| -v).collect(),
        })
    }))
}

struct NewtonSystem<S> {
    /// Quantity compared against `step_tol`.
    stop: f64,
    matrix: DenseMatrix<S>,
    rhs: Vec<S>,
}

fn newton_iteration<P, F>(
    problem: &P,
    x0: &[P::Scalar],
    config: &SolverConfig,
    state: &DeflationState<P::Scalar>,
    mut system: F,
) -> SolveResult<P::Scalar>
where
    P: Problem + ?Sized,
    F: FnMut(
        &mut Counted<'_, P>,
        &[P::Scalar],
        &[P::Scalar],
        &DenseMatrix<P::Scalar>,
    ) -> Result<NewtonSystem<P::Scalar>, crate::problem::ProblemError>,
{
    let mut eval = Counted::new(problem);
    let mut x = x0.to_vec();
    let mut trace = Vec::new();
    let branch = if state.is_empty() {
        Branch::Undeflated
    } else {
        Branch::Deflated
    };

    for k in 0.. {
        let rj = eval.residual(&x).and_then(|r| Ok((eval.jacobian(&x)?, r)));
        let (j, r) = match rj {
            Ok(v) => v,
            Err(e) => {
                let (s, m) = problem_failure(&e);
                return eval.finish(s, x, trace, Some(m));
            }
        };
        let sys = match system(&mut eval, &x, &r, &j) {
            Ok(s) => s,
            Err(e) => {
                let (s, m) = problem_failure(&e);
                return eval.finish(s, x, trace, Some(m));
            }
        };
        let mut record = IterationRecord {
            k,
            x: x.clone(),
            objective: objective(&r),
            residual_norm: scalar::norm(&r),
            grad_norm: scalar::norm(&gradient(&j, &r)),
            step_norm: 0.0,
            eta_dot_p: 0.0,
            beta: 1.0,
            branch,
            alpha: 0.0,
            slope: 0.0,
            bad_step: None,
        };
        if sys.stop <= config.step_tol {
            trace.push(record);
            return eval.finish(SolveStatus::Converged, x, trace, None);
        }
        if k == config.max_iters {
            return eval.finish(SolveStatus::MaxIters, x, trace, None);
        }

        let p = match solve_square(&sys.matrix, &sys.rhs) {
            Ok(p) => p,
            Err(e) => {
                let (s, m) = numerics_failure(&e);
                return eval.finish(s, x, trace, Some(m));
            }
        };
        let grad_eta = match state.grad_eta(&x) {
            Ok(g) => g,
            Err(e) => {
                let (s, m) = deflation_failure(&e);
                return eval.finish(s, x, trace, Some(m));
            }
        };
        let eta_dot_p = scalar::real_dot(&grad_eta, &p);
        let beta = 1.0 - eta_dot_p;
        record.step_norm = scalar::norm(&p);
        record.eta_dot_p = eta_dot_p;
        record.beta = beta;
        record.slope = scalar::real_dot(&gradient(&j, &r), &p);
        if beta.abs() < BETA_FLOOR {
            trace.push(record);
            return eval.finish(SolveStatus::StepUndefined, x, trace, None);
        }
        record.alpha = 1.0;
        trace.push(record);
        let inv_beta = P::Scalar::from_real(1.0 / beta);
        scalar::axpy(inv_beta, &p, &mut x);
    }
    unreachable!("the iteration loop only exits by returning")
}

fn solve_square<S: Scalar>(a: &DenseMatrix<S>, b: &[S]) -> Result<Vec<S>, NumericsError> {
    qr_factorize(a)?.solve(b)
}
