//! Oracles shared by the integration tests. Dense linear algebra goes through
//! nalgebra so that every check compares against an independent
//! implementation.

#![allow(dead_code)]

use deflsq_core::numerics::DenseMatrix;
use deflsq_core::prelude::*;
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

pub fn to_na(a: &DenseMatrix<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(a.rows(), a.cols(), |i, j| a[(i, j)])
}

pub fn to_na_c(a: &DenseMatrix<Complex64>) -> DMatrix<Complex64> {
    DMatrix::from_fn(a.rows(), a.cols(), |i, j| a[(i, j)])
}

pub fn from_na(a: &DMatrix<f64>) -> DenseMatrix<f64> {
    DenseMatrix::from_fn(a.nrows(), a.ncols(), |i, j| a[(i, j)])
}

pub fn svd_pinv(a: &DMatrix<f64>) -> DMatrix<f64> {
    a.clone().pseudo_inverse(1e-14).expect("SVD pseudoinverse")
}

pub fn svd_pinv_c(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    a.clone().pseudo_inverse(1e-14).expect("SVD pseudoinverse")
}

pub fn apply(a: &DMatrix<f64>, v: &[f64]) -> Vec<f64> {
    (a * DVector::from_column_slice(v)).as_slice().to_vec()
}

pub fn apply_c(a: &DMatrix<Complex64>, v: &[Complex64]) -> Vec<Complex64> {
    (a * DVector::from_column_slice(v)).as_slice().to_vec()
}

pub fn min_singular_value(a: &DMatrix<f64>) -> f64 {
    a.singular_values().min()
}

pub fn condition(a: &DMatrix<f64>) -> f64 {
    let s = a.singular_values();
    s.max() / s.min()
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn norm_c(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// `‖a − b‖ / max(‖b‖, floor)`.
pub fn rel_err(a: &[f64], b: &[f64], floor: f64) -> f64 {
    let diff: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    norm(&diff) / norm(b).max(floor)
}

pub fn rel_err_c(a: &[Complex64], b: &[Complex64], floor: f64) -> f64 {
    let diff: Vec<Complex64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    norm_c(&diff) / norm_c(b).max(floor)
}

/// Entries uniform in [−1, 1].
pub fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = DenseMatrix<f64>> {
    prop::collection::vec(-1.0..1.0f64, rows * cols)
        .prop_map(move |v| DenseMatrix::from_row_slice(rows, cols, &v).unwrap())
}

pub fn vector(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0..1.0f64, len)
}

pub fn complex_matrix(rows: usize, cols: usize) -> impl Strategy<Value = DenseMatrix<Complex64>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), rows * cols).prop_map(move |v| {
        let v: Vec<Complex64> = v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect();
        DenseMatrix::from_row_slice(rows, cols, &v).unwrap()
    })
}

pub fn complex_vector(len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), len)
        .prop_map(|v| v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect())
}

/// `rᵢ(x) = (Ax + b)ᵢ + cᵢ·xᵢ³`, a smooth square test system.
#[derive(Debug, Clone)]
pub struct CubicSystem {
    pub a: DenseMatrix<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
}

impl Problem for CubicSystem {
    type Scalar = f64;

    fn name(&self) -> &str {
        "cubic"
    }

    fn num_params(&self) -> usize {
        self.b.len()
    }

    fn num_residuals(&self) -> usize {
        self.b.len()
    }

    fn residual(&self, x: &[f64]) -> Result<Vec<f64>, ProblemError> {
        let mut r = self.a.mul_vec(x)?;
        for i in 0..r.len() {
            r[i] += self.b[i] + self.c[i] * x[i].powi(3);
        }
        Ok(r)
    }

    fn jacobian(&self, x: &[f64]) -> Result<DenseMatrix<f64>, ProblemError> {
        let mut j = self.a.clone();
        for i in 0..x.len() {
            j[(i, i)] += 3.0 * self.c[i] * x[i] * x[i];
        }
        Ok(j)
    }
}

/// `r(x) = Ax − b` for a tall `A`.
#[derive(Debug, Clone)]
pub struct Linear {
    pub a: DenseMatrix<f64>,
    pub b: Vec<f64>,
}

impl Problem for Linear {
    type Scalar = f64;

    fn name(&self) -> &str {
        "linear"
    }

    fn num_params(&self) -> usize {
        self.a.cols()
    }

    fn num_residuals(&self) -> usize {
        self.a.rows()
    }

    fn residual(&self, x: &[f64]) -> Result<Vec<f64>, ProblemError> {
        let mut r = self.a.mul_vec(x)?;
        for (ri, bi) in r.iter_mut().zip(&self.b) {
            *ri -= bi;
        }
        Ok(r)
    }

    fn jacobian(&self, _x: &[f64]) -> Result<DenseMatrix<f64>, ProblemError> {
        Ok(self.a.clone())
    }

    fn residual_hessians(&self, _x: &[f64]) -> Option<Result<Vec<DenseMatrix<f64>>, ProblemError>> {
        let n = self.a.cols();
        Some(Ok(vec![DenseMatrix::zeros(n, n); self.a.rows()]))
    }
}

/// `r(x) = x² − 1` in one unknown.
#[derive(Debug, Clone, Copy)]
pub struct UnitSquare;

impl Problem for UnitSquare {
    type Scalar = f64;

    fn name(&self) -> &str {
        "x^2-1"
    }

    fn num_params(&self) -> usize {
        1
    }

    fn num_residuals(&self) -> usize {
        1
    }

    fn residual(&self, x: &[f64]) -> Result<Vec<f64>, ProblemError> {
        Ok(vec![x[0] * x[0] - 1.0])
    }

    fn jacobian(&self, x: &[f64]) -> Result<DenseMatrix<f64>, ProblemError> {
        Ok(DenseMatrix::from_row_slice(1, 1, &[2.0 * x[0]]).unwrap())
    }
}

/// Central differences of a scalar function.
pub fn fd_gradient(f: impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Vec<f64> {
    let mut xp = x.to_vec();
    (0..x.len())
        .map(|i| {
            xp[i] = x[i] + h;
            let fp = f(&xp);
            xp[i] = x[i] - h;
            let fm = f(&xp);
            xp[i] = x[i];
            (fp - fm) / (2.0 * h)
        })
        .collect()
}

/// Second-order central differences of a scalar function.
pub fn fd_hessian(f: impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> DMatrix<f64> {
    let n = x.len();
    let mut out = DMatrix::zeros(n, n);
    let mut y = x.to_vec();
    for i in 0..n {
        for j in 0..n {
            let mut eval = |di: f64, dj: f64| {
                y.copy_from_slice(x);
                y[i] += di;
                y[j] += dj;
                f(&y)
            };
            out[(i, j)] = (eval(h, h) - eval(h, -h) - eval(-h, h) + eval(-h, -h)) / (4.0 * h * h);
        }
    }
    out
}

pub fn pairwise_min_distance(points: &[Vec<f64>]) -> f64 {
    let mut best = f64::INFINITY;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
            best = best.min(norm(&d));
        }
    }
    best
}

/// The four real roots of Himmelblau's system.
pub const HIMMELBLAU_ROOTS: [[f64; 2]; 4] = [
    [3.0, 2.0],
    [-2.805118086952745, 3.131312518250573],
    [-3.779310253377747, -3.283185991286170],
    [3.584428340330492, -1.848126526964404],
];

/// FTrig run with the settings used across the suites.
pub fn ftrig_solver_config(epsilon: f64) -> SolverConfig {
    SolverConfig {
        step_tol: 1e-12,
        max_iters: 3000,
        epsilon,
        ..SolverConfig::default()
    }
}
