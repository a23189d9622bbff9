use alloc::vec;
use alloc::vec::Vec;

use crate::numerics::DenseMatrix;
use crate::problem::{Problem, ProblemError};

/// `r(x, y) = (x² + y − 11, x + y² − 7)`, a square system with four real roots.
#[derive(Debug, Clone, Copy, Default)]
pub struct Himmelblau;

pub fn himmelblau() -> Himmelblau {
    Himmelblau
}

impl Problem for Himmelblau {
    type Scalar = f64;

    fn name(&self) -> &str {
        "himmelblau"
    }

    fn num_params(&self) -> usize {
        2
    }

    fn num_residuals(&self) -> usize {
        2
    }

    fn residual(&self, x: &[f64]) -> Result<Vec<f64>, ProblemError> {
        self.check_dimension(x)?;
        Ok(vec![x[0] * x[0] + x[1] - 11.0, x[0] + x[1] * x[1] - 7.0])
    }

    fn jacobian(&self, x: &[f64]) -> Result<DenseMatrix<f64>, ProblemError> {
        self.check_dimension(x)?;
        Ok(DenseMatrix::from_row_slice(2, 2, &[2.0 * x[0], 1.0, 1.0, 2.0 * x[1]])?)
    }

    fn residual_hessians(&self, x: &[f64]) -> Option<Result<Vec<DenseMatrix<f64>>, ProblemError>> {
        Some(self.check_dimension(x).map(|()| {
            vec![
                DenseMatrix::diagonal(&[2.0, 0.0]),
                DenseMatrix::diagonal(&[0.0, 2.0]),
            ]
        }))
    }

    fn bounds(&self) -> Option<Vec<(f64, f64)>> {
        Some(vec![(-5.0, 5.0), (-5.0, 5.0)])
    }
}
