mod common;

use std::sync::Arc;

use common::*;
use deflsq_core::deflation::DeflationError;
use deflsq_core::numerics::lsq_min_norm;
use deflsq_core::prelude::*;
use proptest::prelude::*;

fn state(variant: DeflationVariant, theta: f64, sigma: f64, points: &[Vec<f64>]) -> DeflationState<f64> {
    let mut s = DeflationState::euclidean(DeflationConfig {
        theta,
        sigma,
        variant,
    });
    for y in points {
        s.push(y.clone()).unwrap();
    }
    s
}

fn multi(points: &[Vec<f64>]) -> DeflationState<f64> {
    state(DeflationVariant::MultiShift, 2.0, 1.0, points)
}

#[test]
fn mu_values() {
    let x = [0.0, 0.0];
    assert_eq!(multi(&[]).mu_value(&x).unwrap(), 1.0);
    assert!((multi(&[vec![1.0, 0.0]]).mu_value(&x).unwrap() - 2.0).abs() < 1e-15);
    let two = multi(&[vec![1.0, 0.0], vec![0.0, 2.0]]);
    assert!((two.mu_value(&x).unwrap() - 2.5).abs() < 1e-14);
    let far = multi(&[vec![1e3, 0.0]]);
    assert!((far.mu_value(&x).unwrap() - (1.0 + 1e-6)).abs() < 1e-15);
}

#[test]
fn unit_distance_gradients() {
    let x = [0.0, 0.0];
    let y = vec![1.0, 0.0];
    assert_eq!(multi(&[]).grad_eta(&x).unwrap(), vec![0.0, 0.0]);
    let g = multi(&[y.clone()]).grad_eta(&x).unwrap();
    assert!(rel_err(&g, &[1.0, 0.0], 1.0) < 1e-15);
    let e = state(DeflationVariant::Exponential, 2.0, 1.0, &[y.clone()]);
    assert!(rel_err(&e.grad_eta(&x).unwrap(), &[1.0, 0.0], 1.0) < 1e-15);
}

#[test]
fn repeated_point_squares_the_growth() {
    let y = vec![0.5, -0.5];
    let once = multi(&[y.clone()]);
    let twice = multi(&[y.clone(), y.clone()]);
    assert_eq!(twice.len(), 2);
    for d in [1e-2, 1e-3, 1e-4] {
        let x = [0.5 + d, -0.5];
        let (m1, m2) = (once.mu_value(&x).unwrap(), twice.mu_value(&x).unwrap());
        assert!((m2 / (m1 * m1) - 1.0).abs() < 1e-12);
        assert!(m2 * d.powi(4) > 0.99);
    }
}

#[test]
fn deflated_point_is_an_error_and_states_are_values() {
    let s = multi(&[]);
    let s1 = s.with_point(vec![3.0, 2.0]).unwrap();
    assert!(s.is_empty());
    assert_eq!(s1.len(), 1);
    assert!(matches!(
        s1.mu_value(&[3.0, 2.0]),
        Err(DeflationError::AtDeflatedPoint { index: 0 })
    ));
    assert!(s1.with_point(vec![1.0]).is_err());
}

fn variant() -> impl Strategy<Value = DeflationVariant> {
    prop_oneof![
        Just(DeflationVariant::MultiShift),
        Just(DeflationVariant::SingleShift),
        Just(DeflationVariant::Exponential),
    ]
}

fn points(n: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-3.0..3.0f64, 3), 1..=n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn grad_eta_matches_finite_differences(
        variant in variant(),
        theta in 1.0..3.0f64,
        sigma in 0.0..2.0f64,
        ys in points(4),
        x in prop::collection::vec(-3.0..3.0f64, 3),
    ) {
        let s = state(variant, theta, sigma, &ys);
        let dmin = ys.iter().map(|y| norm(&y.iter().zip(&x).map(|(a, b)| a - b).collect::<Vec<_>>())).fold(f64::INFINITY, f64::min);
        prop_assume!(dmin > 0.2);
        let h = 1e-6;
        let fd = fd_gradient(|z| s.evaluate(z).unwrap().log_mu, &x, h);
        let g = s.grad_eta(&x).unwrap();
        prop_assert!(rel_err(&g, &fd, 1e-3) < 1e-5, "{variant:?}: {g:?} vs {fd:?}");
        let e = s.evaluate(&x).unwrap();
        prop_assert!((e.mu.ln() - e.log_mu).abs() <= 1e-12 * (1.0 + e.log_mu.abs()));
    }

    #[test]
    fn multi_shift_gradient_is_additive(ys in points(5), x in prop::collection::vec(-3.0..3.0f64, 3)) {
        let whole = multi(&ys).grad_eta(&x).unwrap();
        let mut sum = vec![0.0; 3];
        for y in &ys {
            let g = multi(std::slice::from_ref(y)).grad_eta(&x).unwrap();
            for (s, gi) in sum.iter_mut().zip(g) {
                *s += gi;
            }
        }
        for (a, b) in whole.iter().zip(&sum) {
            prop_assert!((a - b).abs() <= 1e-14 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn far_field_is_flat(ys in points(5), dir in prop::collection::vec(-1.0..1.0f64, 3), scale in 2.0..1e3f64) {
        prop_assume!(norm(&dir) > 0.1);
        // Put x at least `scale` away from every point.
        let far = 3.0 * 3f64.sqrt() + scale;
        let x: Vec<f64> = dir.iter().map(|d| d / norm(&dir) * far).collect();
        let s = multi(&ys);
        let dmin = ys.iter().map(|y| norm(&y.iter().zip(&x).map(|(a, b)| a - b).collect::<Vec<_>>())).fold(f64::INFINITY, f64::min);
        prop_assert!(dmin >= 2.0);
        let bound = 2.0 * ys.len() as f64 / dmin.powi(2);
        prop_assert!((s.mu_value(&x).unwrap() - 1.0).abs() <= bound);
    }

    #[test]
    fn mu_grows_towards_each_point(
        variant in variant(),
        ys in points(3),
        which in 0usize..3,
        dir in prop::collection::vec(-1.0..1.0f64, 3),
    ) {
        prop_assume!(norm(&dir) > 0.1);
        let y = &ys[which % ys.len()];
        let s = state(variant, 2.0, 1.0, &ys);
        let unit: Vec<f64> = dir.iter().map(|d| d / norm(&dir)).collect();
        let mut last = 0.0;
        for k in 1..=8 {
            let t = 10f64.powi(-k);
            let x: Vec<f64> = y.iter().zip(&unit).map(|(a, u)| a + t * u).collect();
            match s.evaluate(&x) {
                Ok(e) => {
                    prop_assert!(e.log_mu > last);
                    last = e.log_mu;
                }
                // Another point may coincide with y to within the tolerance.
                Err(DeflationError::AtDeflatedPoint { .. }) => break,
                Err(e) => prop_assert!(false, "{e}"),
            }
        }
    }
}

#[test]
fn himmelblau_beta_after_deflating_one_root() {
    let s = multi(&[vec![3.0, 2.0]]);
    // The undeflated Newton step vanishes at a root, so β = 1 exactly there.
    for y in &HIMMELBLAU_ROOTS[1..] {
        let r = Himmelblau.residual(y).unwrap();
        let j = Himmelblau.jacobian(y).unwrap();
        let p = lsq_min_norm(&j, &r.iter().map(|v| -v).collect::<Vec<_>>()).unwrap();
        assert!((s.beta(y, &p).unwrap() - 1.0).abs() < 1e-12);
    }
    // Newton steps near the deflated root point back at it, so β < 0.
    let grid = Grid2d {
        x_range: (2.9, 3.1),
        y_range: (1.9, 2.1),
        nx: 21,
        ny: 21,
    };
    let field = beta_field(&Himmelblau, &s, &grid);
    let regions = field.regions(0.0);
    for (i, region) in regions.iter().enumerate() {
        let [x, y] = grid.node(i);
        if (x - 3.0).hypot(y - 2.0) > 1e-9 {
            assert_eq!(*region, Some(Region::Red), "({x}, {y})");
        }
    }
}

#[test]
fn empty_state_beta_field_is_one() {
    let grid = Grid2d {
        x_range: (-5.0, 5.0),
        y_range: (-5.0, 5.0),
        nx: 41,
        ny: 41,
    };
    let field = beta_field(&Himmelblau, &DeflationState::euclidean(DeflationConfig::default()), &grid);
    assert!(field.values.iter().all(|b| *b == Some(1.0)));
}

#[test]
fn epsilon_only_moves_the_green_yellow_boundary() {
    let s = multi(&HIMMELBLAU_ROOTS[..3].iter().map(|r| r.to_vec()).collect::<Vec<_>>());
    let grid = Grid2d {
        x_range: (-5.0, 5.0),
        y_range: (-5.0, 5.0),
        nx: 101,
        ny: 101,
    };
    let field = beta_field(&Himmelblau, &s, &grid);
    let (r0, r1) = (field.regions(0.0), field.regions(0.01));
    let mut changed = 0;
    for (a, b) in r0.iter().zip(&r1) {
        if a != b {
            assert_eq!((*a, *b), (Some(Region::Yellow), Some(Region::Green)));
            changed += 1;
        }
    }
    assert!(changed > 100, "{changed}");
}

#[test]
fn fe_metric_gradient_matches_finite_differences() {
    let p = bratu_problem(8, 20).unwrap();
    let metric = p.metric();
    let y: Vec<Complex64> = (0..p.num_params())
        .map(|k| Complex64::new((k as f64 * 0.7).sin(), (k as f64 * 0.3).cos() * 0.2))
        .collect();
    let x: Vec<Complex64> = y.iter().enumerate().map(|(k, v)| v + Complex64::new(0.1 * (k as f64).cos(), -0.05)).collect();
    let d = metric.distance(&x, &y);
    let g = metric.distance_gradient(&x, &y, d);
    let h = 1e-6;
    for k in 0..x.len() {
        for (unit, part) in [(Complex64::new(1.0, 0.0), 0), (Complex64::new(0.0, 1.0), 1)] {
            let mut xp = x.clone();
            xp[k] += unit * h;
            let mut xm = x.clone();
            xm[k] -= unit * h;
            let fd = (metric.distance(&xp, &y) - metric.distance(&xm, &y)) / (2.0 * h);
            let an = if part == 0 { g[k].re } else { g[k].im };
            assert!((fd - an).abs() < 1e-6 * (1.0 + an.abs()), "{k}/{part}: {fd} vs {an}");
        }
    }
    // The deflation state built on the FE metric stays consistent with log μ.
    let s = DeflationState::new(DeflationConfig::default(), Arc::clone(&metric)).with_point(y).unwrap();
    let ge = s.grad_eta(&x).unwrap();
    for k in 0..x.len() {
        let mut xp = x.clone();
        xp[k] += Complex64::new(h, 0.0);
        let mut xm = x.clone();
        xm[k] -= Complex64::new(h, 0.0);
        let fd = (s.evaluate(&xp).unwrap().log_mu - s.evaluate(&xm).unwrap().log_mu) / (2.0 * h);
        assert!((fd - ge[k].re).abs() < 1e-5 * (1.0 + fd.abs()));
    }
}
