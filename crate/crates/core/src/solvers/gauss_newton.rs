use alloc::vec::Vec;

use super::line_search::quadratic_line_search;
use super::{
    check_start, deflation_failure, numerics_failure, problem_failure, BadStep, Branch, Counted,
    IterationRecord, SolveResult, SolveStatus, SolverConfig, SolverError, BETA_FLOOR, OMEGA_FLOOR,
};
use crate::deflation::{DeflationConfig, DeflationState};
use crate::numerics::{lsq_min_norm, qr_factorize, NumericsError};
use crate::problem::{gradient, objective, Problem};
use crate::scalar::{self, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Variant {
    Plain,
    Good,
    Bad,
}

/// Gauss–Newton with the minimum-norm step `p = argmin ‖r + J·p‖` and a
/// quadratic line search on `f`. Stops once `‖p‖ ≤ step_tol`.
pub fn gauss_newton<P: Problem + ?Sized>(
    problem: &P,
    x0: &[P::Scalar],
    config: &SolverConfig,
) -> Result<SolveResult<P::Scalar>, SolverError> {
    let empty = DeflationState::for_problem(problem, DeflationConfig::default());
    iterate(problem, x0, config, &empty, Variant::Plain)
}

/// "Good" deflated Gauss–Newton. When `Re⟨∇η, p⟩ > ε` it steps to
/// `x + p/β` without a line search; otherwise it takes the line-searched
/// Gauss–Newton step. Convergence is declared only on an undeflated step.
pub fn good_deflated_gn<P: Problem + ?Sized>(
    problem: &P,
    x0: &[P::Scalar],
    config: &SolverConfig,
    state: &DeflationState<P::Scalar>,
) -> Result<SolveResult<P::Scalar>, SolverError> {
    iterate(problem, x0, config, state, Variant::Good)
}

/// "Bad" deflated Gauss–Newton: Gauss–Newton applied to `μ(x)·r(x)`. On the
/// deflated branch the step is
///
/// ```text
/// p̂ = (β/ω)·p − (‖Pr‖²/ω)·(JᴴJ)⁻¹∇η,   ω = ‖Pr‖²·‖J⁺ᴴ∇η‖² + β²
/// ```
///
/// with every term taken from one QR factorization of `J`. The undeflated
/// branch matches [`good_deflated_gn`].
pub fn bad_deflated_gn<P: Problem + ?Sized>(
    problem: &P,
    x0: &[P::Scalar],
    config: &SolverConfig,
    state: &DeflationState<P::Scalar>,
) -> Result<SolveResult<P::Scalar>, SolverError> {
    iterate(problem, x0, config, state, Variant::Bad)
}

enum Deflated<S> {
    Step(Vec<S>, Option<BadStep>),
    Undefined,
}

fn bad_step<S: Scalar>(
    j: &crate::numerics::DenseMatrix<S>,
    r: &[S],
    p: &[S],
    grad_eta: &[S],
    beta: f64,
) -> Result<Deflated<S>, NumericsError> {
    let f = qr_factorize(j)?;
    let pr = f.apply_projector_complement(r)?;
    let normal = f.apply_normal_inverse(grad_eta)?;
    let pinv_t = f.apply_pinv_transpose(grad_eta)?;
    let pr2 = scalar::norm_sqr(&pr);
    let omega = pr2 * scalar::norm_sqr(&pinv_t) + beta * beta;
    if !(omega >= OMEGA_FLOOR) {
        return Ok(Deflated::Undefined);
    }
    let step: Vec<S> = p
        .iter()
        .zip(&normal)
        .map(|(&pi, &wi)| pi.scale(beta / omega) - wi.scale(pr2 / omega))
        .collect();
    let diag = BadStep {
        omega,
        projected_residual_sqr: pr2,
        eta_dot_step: scalar::real_dot(grad_eta, &step),
    };
    Ok(Deflated::Step(step, Some(diag)))
}

fn iterate<P: Problem + ?Sized>(
    problem: &P,
    x0: &[P::Scalar],
    config: &SolverConfig,
    state: &DeflationState<P::Scalar>,
    variant: Variant,
) -> Result<SolveResult<P::Scalar>, SolverError> {
    check_start(problem, x0, config)?;
    let mut eval = Counted::new(problem);
    let mut x = x0.to_vec();
    let mut trace = Vec::new();
    // f(x_k) is carried over from the accepted line-search trial.
    let mut cached: Option<Vec<P::Scalar>> = None;

    macro_rules! fail {
        ($pair:expr) => {{
            let (status, msg) = $pair;
            return Ok(eval.finish(status, x, trace, Some(msg)));
        }};
    }

    for k in 0.. {
        let r = match cached.take() {
            Some(r) => r,
            None => match eval.residual(&x) {
                Ok(r) => r,
                Err(e) => fail!(problem_failure(&e)),
            },
        };
        if k == config.max_iters {
            return Ok(eval.finish(SolveStatus::MaxIters, x, trace, None));
        }
        let j = match eval.jacobian(&x) {
            Ok(j) => j,
            Err(e) => fail!(problem_failure(&e)),
        };
        let neg_r: Vec<P::Scalar> = r.iter().map(|&v| -v).collect();
        let p = match lsq_min_norm(&j, &neg_r) {
            Ok(p) => p,
            Err(e) => fail!(numerics_failure(&e)),
        };
        let grad = gradient(&j, &r);
        let (eta_dot_p, grad_eta) = if variant == Variant::Plain || state.is_empty() {
            (0.0, None)
        } else {
            match state.grad_eta(&x) {
                Ok(g) => (scalar::real_dot(&g, &p), Some(g)),
                Err(e) => fail!(deflation_failure(&e)),
            }
        };
        let f0 = objective(&r);
        let slope = scalar::real_dot(&grad, &p);
        let beta = 1.0 - eta_dot_p;
        let mut record = IterationRecord {
            k,
            x: x.clone(),
            objective: f0,
            residual_norm: scalar::norm(&r),
            grad_norm: scalar::norm(&grad),
            step_norm: state.metric().norm(&p),
            eta_dot_p,
            beta,
            branch: Branch::Undeflated,
            alpha: 0.0,
            slope,
            bad_step: None,
        };

        if let (Some(grad_eta), true) = (&grad_eta, eta_dot_p > config.epsilon) {
            record.branch = Branch::Deflated;
            let outcome = match variant {
                Variant::Good if beta.abs() < BETA_FLOOR => Deflated::Undefined,
                Variant::Good => {
                    let inv = 1.0 / beta;
                    Deflated::Step(p.iter().map(|v| v.scale(inv)).collect(), None)
                }
                Variant::Bad => match bad_step(&j, &r, &p, grad_eta, beta) {
                    Ok(o) => o,
                    Err(e) => {
                        trace.push(record);
                        fail!(numerics_failure(&e))
                    }
                },
                Variant::Plain => unreachable!("plain Gauss-Newton never deflates"),
            };
            match outcome {
                Deflated::Step(step, diag) => {
                    record.alpha = 1.0;
                    record.bad_step = diag;
                    trace.push(record);
                    scalar::axpy(P::Scalar::one(), &step, &mut x);
                }
                Deflated::Undefined => {
                    trace.push(record);
                    return Ok(eval.finish(SolveStatus::StepUndefined, x, trace, None));
                }
            }
            continue;
        }

        if record.step_norm <= config.step_tol {
            trace.push(record);
            return Ok(eval.finish(SolveStatus::Converged, x, trace, None));
        }
        let mut last_trial: Option<(f64, Vec<P::Scalar>)> = None;
        let search = quadratic_line_search(
            |alpha| {
                let mut xt = x.clone();
                scalar::axpy(P::Scalar::from_real(alpha), &p, &mut xt);
                match eval.residual(&xt) {
                    Ok(rt) => {
                        let ft = objective(&rt);
                        last_trial = Some((alpha, rt));
                        ft
                    }
                    Err(_) => f64::NAN,
                }
            },
            f0,
            slope,
            &config.line_search,
        );
        match search {
            Ok(step) => {
                record.alpha = step.alpha;
                trace.push(record);
                scalar::axpy(P::Scalar::from_real(step.alpha), &p, &mut x);
                cached = last_trial
                    .filter(|(a, _)| *a == step.alpha)
                    .map(|(_, rt)| rt);
            }
            Err(e) => {
                trace.push(record);
                return Ok(eval.finish(
                    SolveStatus::LineSearchFailed,
                    x,
                    trace,
                    Some(alloc::format!("{e}")),
                ));
            }
        }
    }
    unreachable!("the iteration loop only exits by returning")
}
