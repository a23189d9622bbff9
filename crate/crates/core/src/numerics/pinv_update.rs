use alloc::vec::Vec;

use super::{qr_factorize, DenseMatrix, NumericsError};
use crate::scalar;

/// Action of the pseudoinverse of a rank-one updated full-rank matrix on `u`:
///
/// ```text
/// (A + u·vᵀ)⁺·u = (β/ω)·A⁺u + (‖Pu‖²/ω)·(AᵀA)⁻¹v
/// β = 1 + vᵀA⁺u,   ω = ‖Pu‖²·‖A⁺ᵀv‖² + β²,   P = I − AA⁺
/// ```
///
/// With `A = J`, `u = −r` and `v = −∇η` this is the bad deflated Gauss–Newton
/// step. Kept for verification; the solver evaluates the same terms directly
/// from its own factorization.
pub fn pinv_rank_update_action(
    a: &DenseMatrix<f64>,
    u: &[f64],
    v: &[f64],
) -> Result<Vec<f64>, NumericsError> {
    let f = qr_factorize(a)?;
    let a_pinv_u = f.apply_pinv(u)?;
    let pu = f.apply_projector_complement(u)?;
    let normal_v = f.apply_normal_inverse(v)?;
    let pinv_t_v = f.apply_pinv_transpose(v)?;

    let beta = 1.0 + scalar::real_dot(v, &a_pinv_u);
    let pu2 = scalar::norm_sqr(&pu);
    let omega = pu2 * scalar::norm_sqr(&pinv_t_v) + beta * beta;
    if omega == 0.0 {
        return Err(NumericsError::Singular);
    }
    Ok(a_pinv_u
        .iter()
        .zip(&normal_v)
        .map(|(&x, &y)| (beta / omega) * x + (pu2 / omega) * y)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_update_reduces_to_pseudoinverse() {
        let a = DenseMatrix::from_row_slice(3, 2, &[1.0, 0.0, 0.0, 2.0, 1.0, 1.0]).unwrap();
        let u = [1.0, -1.0, 2.0];
        let got = pinv_rank_update_action(&a, &u, &[0.0, 0.0]).unwrap();
        let want = qr_factorize(&a).unwrap().apply_pinv(&u).unwrap();
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-14);
        }
    }

    #[test]
    fn square_case_is_sherman_morrison() {
        let a = DenseMatrix::from_row_slice(2, 2, &[3.0, 1.0, 0.5, 2.0]).unwrap();
        let u = [1.0, 2.0];
        let v = [0.3, -0.4];
        let got = pinv_rank_update_action(&a, &u, &v).unwrap();
        let ainv_u = qr_factorize(&a).unwrap().apply_pinv(&u).unwrap();
        let beta = 1.0 + v[0] * ainv_u[0] + v[1] * ainv_u[1];
        for (g, x) in got.iter().zip(&ainv_u) {
            assert!((g - x / beta).abs() < 1e-12);
        }
    }
}
