mod common;

use common::*;
use deflsq_core::numerics::DenseMatrix;
use deflsq_core::prelude::*;
use deflsq_core::problem::gradient_norm;
use deflsq_core::solvers::{armijo_holds, IterationRecord, RoundRecord};
use nalgebra::DVector;
use proptest::prelude::*;

fn tight() -> SolverConfig {
    SolverConfig {
        step_tol: 1e-12,
        ..SolverConfig::default()
    }
}

fn loop_run<P: Problem + ?Sized>(
    method: Method,
    problem: &P,
    x0: &[P::Scalar],
    rounds: usize,
    config: &SolverConfig,
) -> LoopOutcome<P::Scalar> {
    let state = DeflationState::for_problem(problem, DeflationConfig::default());
    deflation_loop(method, problem, x0, rounds, config, state, &LoopOptions::default()).unwrap()
}

/// Deflation state seen by each round: every earlier converged point.
fn round_states<P: Problem + ?Sized>(problem: &P, rounds: &[RoundRecord<P::Scalar>]) -> Vec<DeflationState<P::Scalar>> {
    let mut state = DeflationState::for_problem(problem, DeflationConfig::default());
    let mut out = Vec::new();
    for r in rounds {
        out.push(state.clone());
        if r.result.converged() {
            state.push(r.result.x.clone()).unwrap();
        }
    }
    out
}

#[test]
fn scalar_newton() {
    let res = newton_root(&UnitSquare, &[2.0], &tight()).unwrap();
    assert!(res.converged());
    assert!(res.iterations() <= 8);
    assert!((res.x[0] - 1.0).abs() < 1e-12);
}

#[test]
fn himmelblau_newton_from_nearby_and_far_starts() {
    let res = newton_root(&Himmelblau, &[3.1, 2.1], &tight()).unwrap();
    assert!(rel_err(&res.x, &[3.0, 2.0], 1.0) < 1e-10);

    let res = newton_root(&Himmelblau, &[-2.5, 3.0], &tight()).unwrap();
    assert!(res.converged());
    assert!(norm(&Himmelblau.residual(&res.x).unwrap()) <= 1e-10);
}

#[test]
fn empty_state_deflated_newton_is_newton() {
    let empty = DeflationState::euclidean(DeflationConfig::default());
    for x0 in [[1.0, 1.0], [-2.5, 3.0], [0.3, -4.0]] {
        let a = newton_root(&Himmelblau, &x0, &tight()).unwrap();
        let b = deflated_newton_root(&Himmelblau, &x0, &tight(), &empty).unwrap();
        assert_eq!(a, b);
    }
}

fn cubic_instance() -> impl Strategy<Value = (CubicSystem, Vec<f64>, Vec<f64>)> {
    (2usize..=5).prop_flat_map(|n| {
        (matrix(n, n), vector(n), vector(n), vector(n), vector(n)).prop_map(|(a, b, c, x, y)| {
            (CubicSystem { a, b, c }, x, y.iter().map(|v| 2.0 * v).collect())
        })
    })
}

/// One Newton step on `μ(x)·r(x)`, with `J_{μr} = μ·(J + r·∇ηᵀ)`.
fn explicit_deflated_newton_step<P: Problem<Scalar = f64>>(problem: &P, state: &DeflationState<f64>, x: &[f64]) -> Option<Vec<f64>> {
    let r = DVector::from_vec(problem.residual(x).ok()?);
    let j = to_na(&problem.jacobian(x).ok()?);
    let e = state.evaluate(x).ok()?;
    let g = DVector::from_vec(e.grad_eta);
    let jd = (&j + &r * g.transpose()) * e.mu;
    if condition(&jd) > 1e6 {
        return None;
    }
    let step = jd.lu().solve(&(-(&r * e.mu)))?;
    Some(x.iter().zip(step.iter()).map(|(a, b)| a + b).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn deflated_newton_is_newton_on_the_deflated_system((problem, x, y) in cubic_instance()) {
        prop_assume!(norm(&x.iter().zip(&y).map(|(a, b)| a - b).collect::<Vec<_>>()) > 0.1);
        prop_assume!(condition(&to_na(&problem.jacobian(&x).unwrap())) < 1e6);
        let state = DeflationState::euclidean(DeflationConfig::default()).with_point(y).unwrap();
        let want = explicit_deflated_newton_step(&problem, &state, &x);
        prop_assume!(want.is_some());
        let want = want.unwrap();
        let config = SolverConfig { max_iters: 1, step_tol: 1e-300, ..SolverConfig::default() };
        let got = deflated_newton_root(&problem, &x, &config, &state).unwrap();
        let step_got: Vec<f64> = got.x.iter().zip(&x).map(|(a, b)| a - b).collect();
        let step_want: Vec<f64> = want.iter().zip(&x).map(|(a, b)| a - b).collect();
        prop_assert!(rel_err(&step_got, &step_want, 1e-300) < 1e-9, "{step_got:?} vs {step_want:?}");
    }

    #[test]
    fn deflated_newton_on_himmelblau_matches_explicit_system(
        x in prop::collection::vec(-5.0..5.0f64, 2),
        root in 0usize..4,
    ) {
        let y = HIMMELBLAU_ROOTS[root].to_vec();
        prop_assume!(rel_err(&x, &y, 1.0) > 0.05);
        prop_assume!(condition(&to_na(&Himmelblau.jacobian(&x).unwrap())) < 1e6);
        let state = DeflationState::euclidean(DeflationConfig::default()).with_point(y).unwrap();
        let want = explicit_deflated_newton_step(&Himmelblau, &state, &x);
        prop_assume!(want.is_some());
        let want = want.unwrap();
        let config = SolverConfig { max_iters: 1, step_tol: 1e-300, ..SolverConfig::default() };
        let got = deflated_newton_root(&Himmelblau, &x, &config, &state).unwrap();
        let step_got: Vec<f64> = got.x.iter().zip(&x).map(|(a, b)| a - b).collect();
        let step_want: Vec<f64> = want.iter().zip(&x).map(|(a, b)| a - b).collect();
        prop_assert!(rel_err(&step_got, &step_want, 1e-300) < 1e-9);
    }
}

#[test]
fn newton_opt_solves_a_quadratic_in_one_step() {
    let a = DenseMatrix::from_row_slice(3, 2, &[1.0, 2.0, -1.0, 0.5, 3.0, 1.0]).unwrap();
    let p = Linear { a: a.clone(), b: vec![1.0, -2.0, 0.5] };
    let empty = DeflationState::euclidean(DeflationConfig::default());
    let res = deflated_newton_opt(&p, &[10.0, -7.0], &tight(), &empty).unwrap();
    assert!(res.converged());
    assert_eq!(res.iterations(), 1);
    let want = apply(&svd_pinv(&to_na(&a)), &p.b);
    assert!(rel_err(&res.x, &want, 1.0) < 1e-12);
}

#[test]
fn gauss_newton_solves_linear_least_squares_in_one_step() {
    let a = DenseMatrix::from_row_slice(4, 2, &[1.0, 0.0, 1.0, 1.0, 1.0, 2.0, 1.0, 3.0]).unwrap();
    let p = Linear { a: a.clone(), b: vec![1.0, 2.0, 2.0, 5.0] };
    let res = gauss_newton(&p, &[0.0, 0.0], &tight()).unwrap();
    assert!(res.converged());
    assert_eq!(res.iterations(), 1);
    assert_eq!(res.trace[0].alpha, 1.0);
    let want = apply(&svd_pinv(&to_na(&a)), &p.b);
    assert!(rel_err(&res.x, &want, 1.0) < 1e-12);
}

#[test]
fn gauss_newton_on_himmelblau_and_bratu() {
    let res = gauss_newton(&Himmelblau, &[1.0, 1.0], &tight()).unwrap();
    assert!(res.converged());
    assert!(res.last().unwrap().objective <= 1e-18);

    let bratu = bratu_problem(100, 400).unwrap();
    let zero = vec![Complex64::new(0.0, 0.0); bratu.num_params()];
    let res = gauss_newton(&bratu, &zero, &SolverConfig::default()).unwrap();
    assert!(res.converged(), "{:?}", res.status);
    assert!(res.last().unwrap().objective <= 1e-16);
}

#[test]
fn empty_state_gn_variants_reproduce_gauss_newton() {
    let cfg = ftrig_solver_config(0.01);
    let ft = ftrig(10.0).unwrap();
    let check = |a: SolveResult<f64>, b: SolveResult<f64>| assert_eq!(a, b);
    for x0 in [[1.0, 3.0], [-4.0, 2.5], [7.0, -9.0]] {
        let empty = DeflationState::for_problem(&ft, DeflationConfig::default());
        let plain = gauss_newton(&ft, &x0, &cfg).unwrap();
        check(good_deflated_gn(&ft, &x0, &cfg, &empty).unwrap(), plain.clone());
        check(bad_deflated_gn(&ft, &x0, &cfg, &empty).unwrap(), plain);
    }
    let bratu = bratu_problem(20, 40).unwrap();
    let c0 = vec![Complex64::new(0.0, 0.0); bratu.num_params()];
    let empty = DeflationState::for_problem(&bratu, DeflationConfig::default());
    let plain = gauss_newton(&bratu, &c0, &SolverConfig::default()).unwrap();
    assert_eq!(good_deflated_gn(&bratu, &c0, &SolverConfig::default(), &empty).unwrap(), plain);
    assert_eq!(bad_deflated_gn(&bratu, &c0, &SolverConfig::default(), &empty).unwrap(), plain);
}

#[test]
fn single_round_loop_is_a_plain_solve() {
    let out = loop_run(Method::GoodGn, &Himmelblau, &[1.0, 1.0], 1, &tight());
    assert_eq!(out.rounds.len(), 1);
    assert_eq!(out.rounds[0].result, gauss_newton(&Himmelblau, &[1.0, 1.0], &tight()).unwrap());
}

#[test]
fn himmelblau_deflated_newton_finds_all_roots() {
    let out = loop_run(Method::DeflatedNewton, &Himmelblau, &[1.0, 1.0], 4, &tight());
    let pts = out.solutions.points();
    assert_eq!(pts.len(), 4);
    assert!(pairwise_min_distance(&pts) > 0.5);
    for p in &pts {
        assert!(Himmelblau.residual(p).unwrap().iter().all(|v| v.abs() <= 1e-10));
    }
}

fn assert_never_reconverges<S: Scalar>(out: &LoopOutcome<S>) {
    for r in &out.rounds {
        if let Some(d) = r.min_distance_to_deflated {
            assert!(d > 1e-3, "round {} ended {d} from a deflated point", r.round);
        }
    }
}

/// Records taking the undeflated branch satisfy Armijo at the accepted α.
fn assert_branches_and_armijo<S: Scalar>(trace: &[IterationRecord<S>], config: &SolverConfig) -> usize {
    let mut checked = 0;
    for w in trace.windows(2) {
        let (rec, next) = (&w[0], &w[1]);
        if rec.eta_dot_p <= config.epsilon {
            assert_eq!(rec.branch, Branch::Undeflated);
            assert!(rec.alpha > 0.0);
            assert!(
                armijo_holds(rec.objective, rec.slope, rec.alpha, next.objective, config.line_search.c1),
                "k={} f0={} f={} slope={} alpha={}",
                rec.k,
                rec.objective,
                next.objective,
                rec.slope,
                rec.alpha
            );
            checked += 1;
        } else {
            assert_eq!(rec.branch, Branch::Deflated);
        }
    }
    checked
}

#[test]
fn ftrig_good_gn_finds_42_minima_with_sound_steps() {
    let ft = ftrig(10.0).unwrap();
    let cfg = ftrig_solver_config(0.01);
    let out = loop_run(Method::GoodGn, &ft, &[1.0, 3.0], 42, &cfg);
    let pts = out.solutions.points();
    assert_eq!(pts.len(), 42);
    for p in &pts {
        assert!(gradient_norm(&ft, p).unwrap() <= 1e-6);
    }
    assert_never_reconverges(&out);
    let mut armijo = 0;
    for r in &out.rounds {
        armijo += assert_branches_and_armijo(&r.result.trace, &cfg);
        assert_eq!(r.result.last().unwrap().branch, Branch::Undeflated);
    }
    assert!(armijo > 100);

    // At every minimum found later, the state of that round sees β ≈ 1.
    let states = round_states(&ft, &out.rounds);
    for (r, s) in out.rounds.iter().zip(&states).skip(1) {
        let last = r.result.last().unwrap();
        assert!(!s.is_empty());
        assert!((s.beta(&last.x, &vec![0.0; 2]).unwrap() - 1.0).abs() < 1e-15);
        assert!(last.eta_dot_p.abs() <= cfg.epsilon);
    }
}

/// `p̂` recomputed from an SVD pseudoinverse and an explicit normal matrix.
fn oracle_bad_step(problem: &FTrig, state: &DeflationState<f64>, x: &[f64]) -> (Vec<f64>, f64, f64) {
    let r = problem.residual(x).unwrap();
    let j = to_na(&problem.jacobian(x).unwrap());
    let pinv = svd_pinv(&j);
    let p: Vec<f64> = apply(&pinv, &r).iter().map(|v| -v).collect();
    let jp = apply(&j, &apply(&pinv, &r));
    let pr: Vec<f64> = r.iter().zip(&jp).map(|(a, b)| a - b).collect();
    let ge = state.grad_eta(x).unwrap();
    let beta = 1.0 - ge.iter().zip(&p).map(|(a, b)| a * b).sum::<f64>();
    let pr2 = norm(&pr).powi(2);
    let omega = pr2 * norm(&apply(&pinv.transpose(), &ge)).powi(2) + beta * beta;
    let normal = (j.transpose() * &j).try_inverse().unwrap();
    let w = apply(&normal, &ge);
    let step = p.iter().zip(&w).map(|(pi, wi)| beta / omega * pi - pr2 / omega * wi).collect();
    (step, beta, omega)
}

#[test]
fn bad_gn_steps_satisfy_the_beta_omega_identity() {
    let ft = ftrig(10.0).unwrap();
    for epsilon in [0.0, 0.01] {
        let cfg = ftrig_solver_config(epsilon);
        let out = loop_run(Method::BadGn, &ft, &[1.0, 3.0], 42, &cfg);
        let states = round_states(&ft, &out.rounds);
        let mut deflated = 0;
        for (r, s) in out.rounds.iter().zip(&states) {
            assert_branches_and_armijo(&r.result.trace, &cfg);
            for (k, rec) in r.result.trace.iter().enumerate() {
                let Some(bad) = rec.bad_step else { continue };
                deflated += 1;
                let target = rec.beta / bad.omega - 1.0;
                assert!((bad.eta_dot_step - target).abs() <= 1e-9 * (1.0 + target.abs()));

                let (step, beta, omega) = oracle_bad_step(&ft, s, &rec.x);
                assert!((beta - rec.beta).abs() <= 1e-9 * (1.0 + beta.abs()));
                assert!((omega - bad.omega).abs() <= 1e-8 * omega);
                let ge = s.grad_eta(&rec.x).unwrap();
                let dot: f64 = step.iter().zip(&ge).map(|(a, b)| a * b).sum();
                assert!((dot - (beta / omega - 1.0)).abs() <= 1e-9 * (1.0 + dot.abs()));
                let next = r.result.trace.get(k + 1).map_or(&r.result.x, |n| &n.x);
                let taken: Vec<f64> = next.iter().zip(&rec.x).map(|(a, b)| a - b).collect();
                // x_{k+1} − x_k carries rounding of order ε·‖x‖.
                let diff: Vec<f64> = taken.iter().zip(&step).map(|(a, b)| a - b).collect();
                let allowed = 1e-7 * norm(&step) + 8.0 * f64::EPSILON * norm(next);
                assert!(norm(&diff) <= allowed, "{taken:?} vs {step:?}");
            }
        }
        assert!(deflated > 50, "{deflated}");
    }
}

#[test]
fn bad_gn_on_a_square_problem_is_the_good_step() {
    // With P = 0 the rank-one correction vanishes and ω = β².
    let state = DeflationState::euclidean(DeflationConfig::default()).with_point(vec![3.0, 2.0]).unwrap();
    let cfg = SolverConfig { max_iters: 1, epsilon: 0.0, ..SolverConfig::default() };
    let x0 = [2.5, 2.5];
    let good = good_deflated_gn(&Himmelblau, &x0, &cfg, &state).unwrap();
    let bad = bad_deflated_gn(&Himmelblau, &x0, &cfg, &state).unwrap();
    assert_eq!(good.trace[0].branch, Branch::Deflated);
    let b = bad.trace[0].bad_step.unwrap();
    assert!(b.projected_residual_sqr < 1e-24);
    assert!((b.omega - bad.trace[0].beta.powi(2)).abs() < 1e-12 * b.omega);
    assert!(rel_err(&bad.x, &good.x, 1.0) < 1e-12);
}

/// Checks `e_{k+1} ≤ C·e_k²` over the last three steps with `e_k = d(x_k, x*)`.
fn assert_quadratic<S: Scalar>(trace: &[IterationRecord<S>], x_final: &[S], metric: &dyn Metric<S>) {
    let e: Vec<f64> = trace.iter().map(|r| metric.distance(&r.x, x_final)).collect();
    let n = e.len();
    assert!(n >= 3, "too short to judge: {e:?}");
    for k in n.saturating_sub(4)..n - 1 {
        // Below ~1e-12 the error is rounding, not the iteration.
        if e[k + 1] > 1e-12 {
            assert!(e[k + 1] <= 1e3 * e[k] * e[k], "{e:?}");
        }
    }
}

#[test]
fn zero_residual_runs_converge_quadratically() {
    for x0 in [[1.0, 1.0], [-1.0, -1.0], [0.5, -3.0]] {
        let res = newton_root(&Himmelblau, &x0, &tight()).unwrap();
        assert_quadratic(&res.trace, &res.x, &Euclidean);
        let res = gauss_newton(&Himmelblau, &x0, &tight()).unwrap();
        assert_quadratic(&res.trace, &res.x, &Euclidean);
    }
    let out = loop_run(Method::DeflatedNewton, &Himmelblau, &[1.0, 1.0], 4, &tight());
    for r in &out.rounds {
        assert_quadratic(&r.result.trace, &r.result.x, &Euclidean);
    }

    let bratu = bratu_problem(100, 400).unwrap();
    let metric = bratu.metric();
    let c0 = vec![Complex64::new(0.0, 0.0); bratu.num_params()];
    let out = loop_run(Method::GoodGn, &bratu, &c0, 2, &SolverConfig::default());
    assert_eq!(out.solutions.len(), 2);
    for r in &out.rounds {
        assert_quadratic(&r.result.trace, &r.result.x, metric.as_ref());
    }
    assert_never_reconverges(&out);
}

#[test]
fn bad_gn_without_epsilon_stops_at_non_minima() {
    let ft = ftrig(10.0).unwrap();
    let out = loop_run(Method::BadGn, &ft, &[1.0, 3.0], 42, &ftrig_solver_config(0.0));
    let worst = out
        .rounds
        .iter()
        .skip(1)
        .map(|r| gradient_norm(&ft, &r.result.x).unwrap())
        .fold(0.0, f64::max);
    assert!(worst > 1e-3, "{worst}");
}

#[test]
fn invalid_inputs_are_rejected() {
    let bad = SolverConfig { step_tol: 0.0, ..SolverConfig::default() };
    assert!(gauss_newton(&Himmelblau, &[1.0, 1.0], &bad).is_err());
    assert!(gauss_newton(&Himmelblau, &[1.0], &tight()).is_err());
    let ft = ftrig(10.0).unwrap();
    assert!(newton_root(&ft, &[1.0, 3.0], &tight()).is_err());
    let bratu = bratu_problem(4, 10).unwrap();
    let c0 = vec![Complex64::new(0.0, 0.0); bratu.num_params()];
    let empty = DeflationState::for_problem(&bratu, DeflationConfig::default());
    assert!(deflated_newton_opt(&bratu, &c0, &tight(), &empty).is_err());
}
