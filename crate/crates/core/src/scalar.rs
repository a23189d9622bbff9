//! Real and complex scalar fields.
//!
//! Every solver and linear-algebra routine is generic over [`Scalar`], which is
//! implemented for `f64` and [`Complex64`]. Inner products are conjugate-linear
//! in the first argument, so `dot(a, b) = Σ conj(aᵢ)·bᵢ`.

use core::fmt::Debug;
use core::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

pub use num_complex::Complex64;
// Float math for toolchains whose `core` lacks it.
#[allow(unused_imports)]
use num_traits::Float;

/// Whether a problem's unknowns are real or complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Field {
    Real,
    Complex,
}

pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
{
    const FIELD: Field;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_real(re: f64) -> Self;
    fn re(self) -> f64;
    fn im(self) -> f64;
    fn conj(self) -> Self;
    /// `|z|`.
    fn modulus(self) -> f64;
    /// `|z|²`.
    fn modulus_sqr(self) -> f64;
    fn scale(self, s: f64) -> Self;
    fn is_finite(self) -> bool;
    fn exp(self) -> Self;
    /// `z / |z|`, or one when `z == 0`.
    fn phase(self) -> Self {
        let m = self.modulus();
        if m == 0.0 {
            Self::one()
        } else {
            self.scale(1.0 / m)
        }
    }
}

impl Scalar for f64 {
    const FIELD: Field = Field::Real;

    #[inline]
    fn zero() -> Self {
        0.0
    }
    #[inline]
    fn one() -> Self {
        1.0
    }
    #[inline]
    fn from_real(re: f64) -> Self {
        re
    }
    #[inline]
    fn re(self) -> f64 {
        self
    }
    #[inline]
    fn im(self) -> f64 {
        0.0
    }
    #[inline]
    fn conj(self) -> Self {
        self
    }
    #[inline]
    fn modulus(self) -> f64 {
        Float::abs(self)
    }
    #[inline]
    fn modulus_sqr(self) -> f64 {
        self * self
    }
    #[inline]
    fn scale(self, s: f64) -> Self {
        self * s
    }
    #[inline]
    fn is_finite(self) -> bool {
        Float::is_finite(self)
    }
    #[inline]
    fn exp(self) -> Self {
        Float::exp(self)
    }
}

impl Scalar for Complex64 {
    const FIELD: Field = Field::Complex;

    #[inline]
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    #[inline]
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    #[inline]
    fn from_real(re: f64) -> Self {
        Complex64::new(re, 0.0)
    }
    #[inline]
    fn re(self) -> f64 {
        self.re
    }
    #[inline]
    fn im(self) -> f64 {
        self.im
    }
    #[inline]
    fn conj(self) -> Self {
        Complex64::new(self.re, -self.im)
    }
    #[inline]
    fn modulus(self) -> f64 {
        Float::hypot(self.re, self.im)
    }
    #[inline]
    fn modulus_sqr(self) -> f64 {
        self.re * self.re + self.im * self.im
    }
    #[inline]
    fn scale(self, s: f64) -> Self {
        Complex64::new(self.re * s, self.im * s)
    }
    #[inline]
    fn is_finite(self) -> bool {
        Float::is_finite(self.re) && Float::is_finite(self.im)
    }
    #[inline]
    fn exp(self) -> Self {
        num_complex::ComplexFloat::exp(self)
    }
}

/// `Σ conj(aᵢ)·bᵢ`.
pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(S::zero(), |acc, (&x, &y)| acc + x.conj() * y)
}

/// Real part of [`dot`]; the directional-derivative pairing used throughout.
pub fn real_dot<S: Scalar>(a: &[S], b: &[S]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(&x, &y)| x.re() * y.re() + x.im() * y.im())
        .sum()
}

pub fn norm_sqr<S: Scalar>(a: &[S]) -> f64 {
    a.iter().map(|x| x.modulus_sqr()).sum()
}

/// Euclidean norm, scaled to avoid overflow for large entries.
pub fn norm<S: Scalar>(a: &[S]) -> f64 {
    let big = a.iter().fold(0.0_f64, |m, x| m.max(x.modulus()));
    if big == 0.0 || !Float::is_finite(big) {
        return big;
    }
    let s: f64 = a.iter().map(|x| (x.scale(1.0 / big)).modulus_sqr()).sum();
    big * Float::sqrt(s)
}

pub fn norm_inf<S: Scalar>(a: &[S]) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.modulus()))
}

pub fn all_finite<S: Scalar>(a: &[S]) -> bool {
    a.iter().all(|x| x.is_finite())
}

/// `y ← y + α·x`.
pub fn axpy<S: Scalar>(alpha: S, x: &[S], y: &mut [S]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, &xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}
