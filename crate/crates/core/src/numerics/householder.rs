//! Householder reflections shared by the plain and column-pivoted QR routines.

use alloc::vec::Vec;

use super::DenseMatrix;
use crate::scalar::{self, Scalar};

/// `H = I − τ·v·vᴴ` acting on rows `offset..`.
#[derive(Debug, Clone)]
pub(crate) struct Reflector<S> {
    pub offset: usize,
    pub v: Vec<S>,
    pub tau: f64,
}

impl<S: Scalar> Reflector<S> {
    /// Reflector mapping `x` onto `α·e₁` with `|α| = ‖x‖`; `None` when `x = 0`.
    fn annihilating(offset: usize, x: &[S]) -> Option<(Self, S)> {
        let nx = scalar::norm(x);
        if nx == 0.0 {
            return None;
        }
        let alpha = -x[0].phase().scale(nx);
        let mut v = x.to_vec();
        v[0] -= alpha;
        let vv = scalar::norm_sqr(&v);
        if vv == 0.0 {
            return None;
        }
        Some((
            Self {
                offset,
                v,
                tau: 2.0 / vv,
            },
            alpha,
        ))
    }

    pub fn apply(&self, y: &mut [S]) {
        let tail = &mut y[self.offset..self.offset + self.v.len()];
        let s = scalar::dot(&self.v, tail).scale(self.tau);
        scalar::axpy(-s, &self.v, tail);
    }
}

/// Householder QR of an `m×n` matrix, optionally with column pivoting.
///
/// On return `work` holds `R` in its upper trapezoid (below-diagonal entries are
/// zeroed), `perm[k]` is the original index of the `k`-th factored column.
pub(crate) struct HouseholderQr<S> {
    pub work: DenseMatrix<S>,
    pub reflectors: Vec<Reflector<S>>,
    pub perm: Vec<usize>,
}

impl<S: Scalar> HouseholderQr<S> {
    pub fn factor(a: &DenseMatrix<S>, pivot: bool) -> Self {
        let (m, n) = a.shape();
        let mut work = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut reflectors = Vec::new();
        let steps = m.min(n);
        for k in 0..steps {
            if pivot {
                let mut best = k;
                let mut best_norm = -1.0;
                for j in k..n {
                    let c = scalar::norm_sqr(&work.column(j)[k..]);
                    if c > best_norm {
                        best_norm = c;
                        best = j;
                    }
                }
                if best != k {
                    swap_columns(&mut work, k, best);
                    perm.swap(k, best);
                }
            }
            let x = work.column(k)[k..].to_vec();
            if let Some((h, alpha)) = Reflector::annihilating(k, &x) {
                {
                    let col = work.column_mut(k);
                    col[k] = alpha;
                    for v in &mut col[k + 1..] {
                        *v = S::zero();
                    }
                }
                for j in k + 1..n {
                    h.apply(work.column_mut(j));
                }
                reflectors.push(h);
            }
        }
        Self {
            work,
            reflectors,
            perm,
        }
    }

    /// `Qᴴ·b`.
    pub fn apply_qh(&self, b: &mut [S]) {
        for h in &self.reflectors {
            h.apply(b);
        }
    }

    /// `Q·b` (reflectors are Hermitian, applied in reverse).
    pub fn apply_q(&self, b: &mut [S]) {
        for h in self.reflectors.iter().rev() {
            h.apply(b);
        }
    }
}

fn swap_columns<S: Scalar>(a: &mut DenseMatrix<S>, i: usize, j: usize) {
    for r in 0..a.rows() {
        let t = a[(r, i)];
        a[(r, i)] = a[(r, j)];
        a[(r, j)] = t;
    }
}

/// Solves `R·x = b` for upper-triangular `R` stored in the leading `n×n` block.
pub(crate) fn solve_upper<S: Scalar>(r: &DenseMatrix<S>, n: usize, b: &mut [S]) {
    for i in (0..n).rev() {
        let mut s = b[i];
        for j in i + 1..n {
            s -= r[(i, j)] * b[j];
        }
        b[i] = s / r[(i, i)];
    }
}

/// Solves `Rᴴ·x = b` for upper-triangular `R` stored in the leading `n×n` block.
pub(crate) fn solve_upper_adjoint<S: Scalar>(r: &DenseMatrix<S>, n: usize, b: &mut [S]) {
    for i in 0..n {
        let mut s = b[i];
        for j in 0..i {
            s -= r[(j, i)].conj() * b[j];
        }
        b[i] = s / r[(i, i)].conj();
    }
}
