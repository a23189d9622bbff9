//! Dense linear algebra used by every solver: minimum-norm least squares, thin
//! QR with the projector and pseudoinverse actions it supports, a symmetric
//! eigen-solver and finite-difference Jacobians.

mod eigen;
mod fd;
mod householder;
mod lstsq;
mod matrix;
mod pinv_update;
mod qr;

pub use eigen::{symmetric_eigen, SymmetricEigen};
pub use fd::{default_fd_step, fd_jacobian};
pub use lstsq::{lsq_min_norm, lsq_min_norm_with_tol};
pub use matrix::DenseMatrix;
pub use pinv_update::pinv_rank_update_action;
pub use qr::{qr_factorize, QRFactors};

/// `|Rᵢᵢ| < RANK_TOLERANCE·max|Rⱼⱼ|` declares a factorization rank deficient.
pub const RANK_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumericsError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Shape { expected: usize, found: usize },
    #[error("matrix is {rows}x{cols}; a tall or square matrix is required")]
    NotTall { rows: usize, cols: usize },
    #[error("matrix is {rows}x{cols}; a square matrix is required")]
    NotSquare { rows: usize, cols: usize },
    #[error("empty matrix")]
    Empty,
    #[error("non-finite input")]
    NonFinite,
    #[error("rank deficient (min/max |R_ii| = {ratio:e})")]
    RankDeficient { ratio: f64 },
    #[error("matrix is exactly singular")]
    Singular,
}
