//! The nonlinear least squares problem interface.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::deflation::{Euclidean, Metric};
use crate::numerics::{DenseMatrix, NumericsError};
use crate::scalar::{self, Field, Scalar};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ProblemError {
    #[error("expected {expected} unknowns, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("eigenvalues {index} and {} coincide (gap {gap:e})", index + 1)]
    DegenerateEigenvalues { index: usize, gap: f64 },
    #[error("evaluation produced non-finite values")]
    NonFinite,
    #[error("{0}")]
    Numerics(#[from] NumericsError),
    #[error("invalid problem parameters: {0}")]
    InvalidParameters(String),
}

/// A residual `r: Sᶫ → Sᵐ` with its Jacobian; the objective is `f = ½‖r‖²`.
///
/// Complex problems must be holomorphic in the unknowns so that `J` is the
/// complex derivative. Gradients of real-valued quantities with respect to
/// complex unknowns are packed as `∂/∂Re + i·∂/∂Im`.
pub trait Problem: Send + Sync {
    type Scalar: Scalar;

    fn name(&self) -> &str;
    fn num_params(&self) -> usize;
    fn num_residuals(&self) -> usize;

    fn residual(&self, x: &[Self::Scalar]) -> Result<Vec<Self::Scalar>, ProblemError>;
    fn jacobian(&self, x: &[Self::Scalar]) -> Result<DenseMatrix<Self::Scalar>, ProblemError>;

    /// Hessians `H_{rᵢ}` of every residual component, if the problem has them.
    fn residual_hessians(
        &self,
        _x: &[Self::Scalar],
    ) -> Option<Result<Vec<DenseMatrix<Self::Scalar>>, ProblemError>> {
        None
    }

    fn field(&self) -> Field {
        Self::Scalar::FIELD
    }

    /// Distance used for deflation and for deciding whether two solutions are
    /// the same.
    fn metric(&self) -> Arc<dyn Metric<Self::Scalar>> {
        Arc::new(Euclidean)
    }

    /// Sampling box for random restarts.
    fn bounds(&self) -> Option<Vec<(f64, f64)>> {
        None
    }

    fn check_dimension(&self, x: &[Self::Scalar]) -> Result<(), ProblemError> {
        if x.len() == self.num_params() {
            Ok(())
        } else {
            Err(ProblemError::Dimension {
                expected: self.num_params(),
                found: x.len(),
            })
        }
    }
}

/// `f = ½‖r‖²`.
pub fn objective<S: Scalar>(r: &[S]) -> f64 {
    0.5 * scalar::norm_sqr(r)
}

/// `∇f = Jᴴr`.
pub fn gradient<S: Scalar>(j: &DenseMatrix<S>, r: &[S]) -> Vec<S> {
    j.adjoint_mul_vec(r).expect("Jacobian and residual shapes agree")
}

/// Evaluates `‖∇f(x)‖`.
pub fn gradient_norm<P: Problem + ?Sized>(problem: &P, x: &[P::Scalar]) -> Result<f64, ProblemError> {
    let r = problem.residual(x)?;
    let j = problem.jacobian(x)?;
    Ok(scalar::norm(&gradient(&j, &r)))
}
