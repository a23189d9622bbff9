use alloc::vec::Vec;

use super::DenseMatrix;
use crate::problem::{Problem, ProblemError};
use crate::scalar::{self, Scalar};

/// Default central-difference step `1e-5·(1 + ‖x‖∞)`.
pub fn default_fd_step<S: Scalar>(x: &[S]) -> f64 {
    1e-5 * (1.0 + scalar::norm_inf(x))
}

/// Central-difference Jacobian. Columns are differentiated along the real axis
/// of each unknown, which is the complex derivative for holomorphic residuals.
pub fn fd_jacobian<P: Problem + ?Sized>(
    problem: &P,
    x: &[P::Scalar],
    h: f64,
) -> Result<DenseMatrix<P::Scalar>, ProblemError> {
    let m = problem.num_residuals();
    let mut jac = DenseMatrix::zeros(m, x.len());
    let mut xp: Vec<P::Scalar> = x.to_vec();
    for j in 0..x.len() {
        let orig = xp[j];
        xp[j] = orig + P::Scalar::from_real(h);
        let rp = problem.residual(&xp)?;
        xp[j] = orig - P::Scalar::from_real(h);
        let rm = problem.residual(&xp)?;
        xp[j] = orig;
        for (dst, (a, b)) in jac.column_mut(j).iter_mut().zip(rp.iter().zip(&rm)) {
            *dst = (*a - *b).scale(0.5 / h);
        }
    }
    Ok(jac)
}
