use alloc::vec::Vec;

use super::householder::{solve_upper, solve_upper_adjoint, HouseholderQr};
use super::{DenseMatrix, NumericsError, RANK_TOLERANCE};
use crate::scalar::{self, Scalar};

/// Thin QR factorization `J = Q·R` with `Q` (`m×ℓ`) having orthonormal columns
/// and `R` (`ℓ×ℓ`) upper triangular with a real nonnegative diagonal.
///
/// One factorization serves every projector and pseudoinverse action the bad
/// deflated Gauss–Newton step needs.
#[derive(Debug, Clone)]
pub struct QRFactors<S> {
    q: DenseMatrix<S>,
    r: DenseMatrix<S>,
}

/// Thin QR of a tall (or square) matrix.
pub fn qr_factorize<S: Scalar>(j: &DenseMatrix<S>) -> Result<QRFactors<S>, NumericsError> {
    let (m, l) = j.shape();
    if m < l {
        return Err(NumericsError::NotTall { rows: m, cols: l });
    }
    if m == 0 || l == 0 {
        return Err(NumericsError::Empty);
    }
    if !j.is_finite() {
        return Err(NumericsError::NonFinite);
    }
    let h = HouseholderQr::factor(j, false);
    let mut r = DenseMatrix::from_fn(l, l, |a, b| if a <= b { h.work[(a, b)] } else { S::zero() });
    let mut q = DenseMatrix::zeros(m, l);
    for c in 0..l {
        let col = q.column_mut(c);
        col[c] = S::one();
        h.apply_q(col);
    }
    // Rotate phases so diag(R) is real and nonnegative; Q·R is unchanged.
    for k in 0..l {
        let d = r[(k, k)].phase();
        if d != S::one() {
            for c in k..l {
                r[(k, c)] = d.conj() * r[(k, c)];
            }
            for v in q.column_mut(k) {
                *v *= d;
            }
        }
    }
    Ok(QRFactors { q, r })
}

impl<S: Scalar> QRFactors<S> {
    pub fn q(&self) -> &DenseMatrix<S> {
        &self.q
    }

    pub fn r(&self) -> &DenseMatrix<S> {
        &self.r
    }

    pub fn rows(&self) -> usize {
        self.q.rows()
    }

    pub fn cols(&self) -> usize {
        self.r.cols()
    }

    /// `(min|Rᵢᵢ|, max|Rⱼⱼ|)`.
    pub fn diagonal_range(&self) -> (f64, f64) {
        (0..self.cols()).fold((f64::INFINITY, 0.0_f64), |(lo, hi), k| {
            let d = self.r[(k, k)].modulus();
            (lo.min(d), hi.max(d))
        })
    }

    /// True when `|Rᵢᵢ| < 1e-12·max|Rⱼⱼ|` for some `i`.
    pub fn is_rank_deficient(&self) -> bool {
        let (lo, hi) = self.diagonal_range();
        hi == 0.0 || lo < RANK_TOLERANCE * hi
    }

    fn require_full_rank(&self) -> Result<(), NumericsError> {
        if self.is_rank_deficient() {
            let (lo, hi) = self.diagonal_range();
            Err(NumericsError::RankDeficient {
                ratio: if hi == 0.0 { 0.0 } else { lo / hi },
            })
        } else {
            Ok(())
        }
    }

    fn check(&self, found: usize, expected: usize) -> Result<(), NumericsError> {
        if found == expected {
            Ok(())
        } else {
            Err(NumericsError::Shape { expected, found })
        }
    }

    /// `(JᴴJ)⁻¹·v` by two triangular solves.
    pub fn apply_normal_inverse(&self, v: &[S]) -> Result<Vec<S>, NumericsError> {
        self.check(v.len(), self.cols())?;
        self.require_full_rank()?;
        let mut w = v.to_vec();
        solve_upper_adjoint(&self.r, self.cols(), &mut w);
        solve_upper(&self.r, self.cols(), &mut w);
        Ok(w)
    }

    /// `P·r = r − Q·(Qᴴ·r)`, the component of `r` orthogonal to `range(J)`.
    pub fn apply_projector_complement(&self, r: &[S]) -> Result<Vec<S>, NumericsError> {
        self.check(r.len(), self.rows())?;
        let c = self.q.adjoint_mul_vec(r)?;
        let qc = self.q.mul_vec(&c)?;
        Ok(r.iter().zip(&qc).map(|(&a, &b)| a - b).collect())
    }

    /// `J⁺ᴴ·v = Q·(R⁻ᴴ·v)`.
    pub fn apply_pinv_transpose(&self, v: &[S]) -> Result<Vec<S>, NumericsError> {
        self.check(v.len(), self.cols())?;
        self.require_full_rank()?;
        let mut w = v.to_vec();
        solve_upper_adjoint(&self.r, self.cols(), &mut w);
        self.q.mul_vec(&w)
    }

    /// `J⁺·b = R⁻¹·(Qᴴ·b)`, the least-squares solution for full-rank `J`.
    pub fn apply_pinv(&self, b: &[S]) -> Result<Vec<S>, NumericsError> {
        self.check(b.len(), self.rows())?;
        self.require_full_rank()?;
        let mut c = self.q.adjoint_mul_vec(b)?;
        solve_upper(&self.r, self.cols(), &mut c);
        Ok(c)
    }

    /// `R⁻¹·(Qᴴ·b)` for square `J`, failing only on an exactly zero pivot or a
    /// non-finite result. Mirrors a plain direct solve on an ill-conditioned
    /// but nonsingular matrix.
    pub fn solve(&self, b: &[S]) -> Result<Vec<S>, NumericsError> {
        self.check(b.len(), self.rows())?;
        if self.rows() != self.cols() {
            return Err(NumericsError::NotSquare {
                rows: self.rows(),
                cols: self.cols(),
            });
        }
        if self.diagonal_range().0 == 0.0 {
            return Err(NumericsError::Singular);
        }
        let mut c = self.q.adjoint_mul_vec(b)?;
        solve_upper(&self.r, self.cols(), &mut c);
        if scalar::all_finite(&c) {
            Ok(c)
        } else {
            Err(NumericsError::NonFinite)
        }
    }

    /// Frobenius norm of `Q·R − J`, for diagnostics.
    pub fn reconstruction_error(&self, j: &DenseMatrix<S>) -> f64 {
        match self.q.matmul(&self.r) {
            Ok(qr) => match qr.add_scaled(-S::one(), j) {
                Ok(d) => d.frobenius_norm(),
                Err(_) => f64::INFINITY,
            },
            Err(_) => f64::INFINITY,
        }
    }

    /// Frobenius norm of `QᴴQ − I`.
    pub fn orthogonality_error(&self) -> f64 {
        let l = self.cols();
        let mut acc = 0.0;
        for a in 0..l {
            for b in 0..l {
                let mut g = scalar::dot(self.q.column(a), self.q.column(b));
                if a == b {
                    g -= S::one();
                }
                acc += g.modulus_sqr();
            }
        }
        num_traits::Float::sqrt(acc)
    }
}
