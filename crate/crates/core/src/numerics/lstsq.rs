//! Minimum-norm linear least squares via a complete orthogonal decomposition.
//!
//! `J·Π = Q·[T; 0]` by column-pivoted Householder QR, truncated at the numerical
//! rank; the trapezoid `T` is then reduced by a second QR of `Tᴴ`. The result is
//! the minimizer of `‖J·p − b‖₂` with the smallest `‖p‖₂`, matching what a
//! rank-revealing `lsqminnorm`-style routine returns.

use alloc::vec;
use alloc::vec::Vec;

use super::householder::{solve_upper, solve_upper_adjoint, HouseholderQr};
use super::{DenseMatrix, NumericsError};
use crate::scalar::{self, Scalar};

/// Minimum-2-norm minimizer of `‖J·p − b‖₂` with the default rank tolerance
/// `max(m, ℓ)·ε_mach` relative to the largest pivot.
pub fn lsq_min_norm<S: Scalar>(j: &DenseMatrix<S>, b: &[S]) -> Result<Vec<S>, NumericsError> {
    let tol = (j.rows().max(j.cols()) as f64) * f64::EPSILON;
    lsq_min_norm_with_tol(j, b, tol)
}

/// As [`lsq_min_norm`], treating pivots below `rel_tol·|R₁₁|` as zero.
pub fn lsq_min_norm_with_tol<S: Scalar>(
    j: &DenseMatrix<S>,
    b: &[S],
    rel_tol: f64,
) -> Result<Vec<S>, NumericsError> {
    let (m, l) = j.shape();
    if m == 0 || l == 0 {
        return Err(NumericsError::Empty);
    }
    if b.len() != m {
        return Err(NumericsError::Shape {
            expected: m,
            found: b.len(),
        });
    }
    if !j.is_finite() || !scalar::all_finite(b) {
        return Err(NumericsError::NonFinite);
    }

    let h = HouseholderQr::factor(j, true);
    let lead = h.work[(0, 0)].modulus();
    let rank = if lead == 0.0 {
        0
    } else {
        (0..m.min(l))
            .take_while(|&k| h.work[(k, k)].modulus() > rel_tol * lead)
            .count()
    };
    if rank == 0 {
        return Ok(vec![S::zero(); l]);
    }

    let mut c = b.to_vec();
    h.apply_qh(&mut c);
    c.truncate(rank);

    let y = if rank == l {
        solve_upper(&h.work, rank, &mut c);
        c
    } else {
        // Tᴴ = Z·S, so T = Sᴴ·Zᴴ and the minimum-norm solution of T·y = c is
        // y = Z·[S⁻ᴴ·c; 0].
        let th = DenseMatrix::from_fn(l, rank, |a, bcol| {
            if bcol <= a {
                h.work[(bcol, a)].conj()
            } else {
                S::zero()
            }
        });
        let h2 = HouseholderQr::factor(&th, false);
        solve_upper_adjoint(&h2.work, rank, &mut c);
        let mut y = vec![S::zero(); l];
        y[..rank].copy_from_slice(&c);
        h2.apply_q(&mut y);
        y
    };

    let mut p = vec![S::zero(); l];
    for (k, &orig) in h.perm.iter().enumerate() {
        p[orig] = y[k];
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Complex64;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn identity_returns_rhs() {
        let p = lsq_min_norm(&DenseMatrix::identity(2), &[1.0, 2.0]).unwrap();
        assert!(close(&p, &[1.0, 2.0], 1e-15));
    }

    #[test]
    fn overdetermined_column_gives_mean() {
        let j = DenseMatrix::from_row_slice(2, 1, &[1.0, 1.0]).unwrap();
        let p = lsq_min_norm(&j, &[1.0, 3.0]).unwrap();
        assert!(close(&p, &[2.0], 1e-15));
    }

    #[test]
    fn underdetermined_row_gives_minimum_norm() {
        // x + y = 2 → (1, 1)
        let j = DenseMatrix::from_row_slice(1, 2, &[1.0, 1.0]).unwrap();
        let p = lsq_min_norm(&j, &[2.0]).unwrap();
        assert!(close(&p, &[1.0, 1.0], 1e-15));
    }

    #[test]
    fn rank_deficient_square_gives_minimum_norm() {
        // Columns are equal, so p₁ + p₂ = 1 in the least-squares sense.
        let j = DenseMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]).unwrap();
        let p = lsq_min_norm(&j, &[1.0, 1.0]).unwrap();
        assert!(close(&p, &[0.5, 0.5], 1e-14));
    }

    #[test]
    fn zero_matrix_gives_zero() {
        let p = lsq_min_norm(&DenseMatrix::zeros(3, 2), &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(p, vec![0.0, 0.0]);
    }

    #[test]
    fn non_finite_input_is_rejected() {
        let j = DenseMatrix::identity(2);
        assert!(matches!(
            lsq_min_norm(&j, &[f64::NAN, 0.0]),
            Err(NumericsError::NonFinite)
        ));
        assert!(matches!(
            lsq_min_norm(&j, &[0.0]),
            Err(NumericsError::Shape { .. })
        ));
    }

    #[test]
    fn complex_square_system_is_solved() {
        let c = |re, im| Complex64::new(re, im);
        let j = DenseMatrix::from_row_slice(2, 2, &[c(1.0, 1.0), c(0.0, 0.0), c(2.0, 0.0), c(0.0, -1.0)])
            .unwrap();
        let x = [c(0.5, -2.0), c(1.0, 3.0)];
        let b = j.mul_vec(&x).unwrap();
        let p = lsq_min_norm(&j, &b).unwrap();
        for (a, e) in p.iter().zip(&x) {
            assert!((*a - *e).modulus() < 1e-14);
        }
    }
}
