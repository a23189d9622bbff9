//! Fourier extension on `[0, 1]`: a Fourier series periodic on `[−1, 1]`,
//! sampled on the collocation nodes `x_k = k/m`.
//!
//! `u(x_k) = Σ_{j=−n}^{n} c_j·e^{ijπk/m}` is a length-`2m` inverse DFT, so grid
//! evaluation and its adjoint run through a Bluestein FFT whenever the grid is
//! at least as long as the coefficient vector.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

// Float math for toolchains whose `core` lacks it.
#[allow(unused_imports)]
use num_traits::Float;

use crate::deflation::Metric;
use crate::numerics::{lsq_min_norm, DenseMatrix, NumericsError};
use crate::scalar::{self, Complex64};

type C = Complex64;

fn cis(theta: f64) -> C {
    C::new(theta.cos(), theta.sin())
}

/// In-place iterative radix-2 FFT, `X_j = Σ x_k e^{−2πijk/n}`.
#[derive(Debug, Clone)]
struct Radix2 {
    n: usize,
    twiddles: Vec<C>,
}

impl Radix2 {
    fn new(n: usize) -> Self {
        debug_assert!(n.is_power_of_two());
        let twiddles = (0..n / 2).map(|k| cis(-2.0 * PI * k as f64 / n as f64)).collect();
        Self { n, twiddles }
    }

    fn forward(&self, a: &mut [C]) {
        let n = self.n;
        let bits = n.trailing_zeros();
        if n <= 1 {
            return;
        }
        for i in 0..n {
            let j = i.reverse_bits() >> (usize::BITS - bits);
            if i < j {
                a.swap(i, j);
            }
        }
        let mut len = 2;
        while len <= n {
            let stride = n / len;
            for start in (0..n).step_by(len) {
                for k in 0..len / 2 {
                    let w = self.twiddles[k * stride];
                    let u = a[start + k];
                    let v = a[start + k + len / 2] * w;
                    a[start + k] = u + v;
                    a[start + k + len / 2] = u - v;
                }
            }
            len <<= 1;
        }
    }

    fn inverse_unnormalized(&self, a: &mut [C]) {
        a.iter_mut().for_each(|z| *z = z.conj());
        self.forward(a);
        a.iter_mut().for_each(|z| *z = z.conj());
    }
}

/// Forward DFT of arbitrary length.
#[derive(Debug, Clone)]
enum Dft {
    Pow2(Radix2),
    Bluestein {
        len: usize,
        fft: Radix2,
        chirp: Vec<C>,
        filter_hat: Vec<C>,
    },
}

impl Dft {
    fn new(len: usize) -> Self {
        if len.is_power_of_two() {
            return Dft::Pow2(Radix2::new(len));
        }
        let l = (2 * len - 1).next_power_of_two();
        let fft = Radix2::new(l);
        // w_k = e^{−iπk²/N}; reduce k² mod 2N first to keep the angle exact.
        let chirp: Vec<C> = (0..len)
            .map(|k| {
                let k2 = (k as u128 * k as u128) % (2 * len as u128);
                cis(-PI * k2 as f64 / len as f64)
            })
            .collect();
        let mut filter_hat = vec![C::new(0.0, 0.0); l];
        filter_hat[0] = chirp[0].conj();
        for k in 1..len {
            filter_hat[k] = chirp[k].conj();
            filter_hat[l - k] = chirp[k].conj();
        }
        fft.forward(&mut filter_hat);
        Dft::Bluestein {
            len,
            fft,
            chirp,
            filter_hat,
        }
    }

    fn forward(&self, x: &[C]) -> Vec<C> {
        match self {
            Dft::Pow2(fft) => {
                let mut a = x.to_vec();
                fft.forward(&mut a);
                a
            }
            Dft::Bluestein {
                len,
                fft,
                chirp,
                filter_hat,
            } => {
                let l = filter_hat.len();
                let mut a = vec![C::new(0.0, 0.0); l];
                for k in 0..*len {
                    a[k] = x[k] * chirp[k];
                }
                fft.forward(&mut a);
                for (ak, fk) in a.iter_mut().zip(filter_hat) {
                    *ak *= fk;
                }
                fft.inverse_unnormalized(&mut a);
                let inv_l = 1.0 / l as f64;
                (0..*len).map(|j| a[j] * chirp[j] * inv_l).collect()
            }
        }
    }

    /// `Σ x_k e^{+2πijk/N}` without normalization.
    fn inverse_unnormalized(&self, x: &[C]) -> Vec<C> {
        let conj: Vec<C> = x.iter().map(|z| z.conj()).collect();
        self.forward(&conj).into_iter().map(|z| z.conj()).collect()
    }
}

/// Collocation grid for a Fourier extension with `N = 2n + 1` coefficients.
#[derive(Debug, Clone)]
pub struct FourierExtensionGrid {
    n: usize,
    m: usize,
    nodes: Vec<f64>,
    /// `E_kj = e^{ijπx_k}`, `(m+1) × N`, with column `j + n` for frequency `j`.
    basis: DenseMatrix<C>,
    dft: Option<Dft>,
}

impl FourierExtensionGrid {
    /// Requires `n ≥ 1` and `m ≥ 2n`.
    pub fn new(n: usize, m: usize) -> Result<Self, NumericsError> {
        if n == 0 || m < 2 * n {
            return Err(NumericsError::Shape {
                expected: 2 * n.max(1),
                found: m,
            });
        }
        let nodes: Vec<f64> = (0..=m).map(|k| k as f64 / m as f64).collect();
        let nn = 2 * n + 1;
        let two_m = 2 * m as i64;
        let basis = DenseMatrix::from_fn(m + 1, nn, |k, col| {
            let j = col as i64 - n as i64;
            // e^{ijπk/m} with jk reduced mod 2m.
            let jk = (j * k as i64).rem_euclid(two_m);
            cis(PI * jk as f64 / m as f64)
        });
        let dft = (m + 1 >= nn).then(|| Dft::new(2 * m));
        Ok(Self {
            n,
            m,
            nodes,
            basis,
            dft,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn num_coefficients(&self) -> usize {
        2 * self.n + 1
    }

    pub fn num_nodes(&self) -> usize {
        self.m + 1
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Frequency of coefficient slot `index`.
    pub fn frequency(&self, index: usize) -> i64 {
        index as i64 - self.n as i64
    }

    pub fn basis(&self) -> &DenseMatrix<C> {
        &self.basis
    }

    pub fn uses_fast_transform(&self) -> bool {
        self.dft.is_some()
    }

    /// Grid values `u(x_k)`.
    pub fn evaluate(&self, c: &[C]) -> Vec<C> {
        assert_eq!(c.len(), self.num_coefficients(), "coefficient length");
        match &self.dft {
            Some(dft) => {
                let two_m = 2 * self.m as i64;
                let mut a = vec![C::new(0.0, 0.0); 2 * self.m];
                for (idx, &cj) in c.iter().enumerate() {
                    a[self.frequency(idx).rem_euclid(two_m) as usize] += cj;
                }
                let mut u = dft.inverse_unnormalized(&a);
                u.truncate(self.m + 1);
                u
            }
            None => self.evaluate_direct(c),
        }
    }

    /// `E·c` by direct summation.
    pub fn evaluate_direct(&self, c: &[C]) -> Vec<C> {
        self.basis.mul_vec(c).expect("coefficient length")
    }

    /// `Eᴴ·v` for grid data `v`.
    pub fn adjoint(&self, v: &[C]) -> Vec<C> {
        assert_eq!(v.len(), self.num_nodes(), "grid length");
        match &self.dft {
            Some(dft) => {
                let two_m = 2 * self.m as i64;
                let mut a = vec![C::new(0.0, 0.0); 2 * self.m];
                a[..v.len()].copy_from_slice(v);
                let spec = dft.forward(&a);
                (0..self.num_coefficients())
                    .map(|idx| spec[self.frequency(idx).rem_euclid(two_m) as usize])
                    .collect()
            }
            None => self.adjoint_direct(v),
        }
    }

    pub fn adjoint_direct(&self, v: &[C]) -> Vec<C> {
        self.basis.adjoint_mul_vec(v).expect("grid length")
    }

    /// `‖c‖_FE = ‖E·c‖₂ / √(m+1)`, the RMS of the grid values.
    pub fn fe_norm(&self, c: &[C]) -> f64 {
        scalar::norm(&self.evaluate(c)) / ((self.m + 1) as f64).sqrt()
    }

    /// Minimum-norm least-squares coefficients for grid values `g(x_k)`.
    pub fn fit(&self, values: &[C]) -> Result<Vec<C>, NumericsError> {
        lsq_min_norm(&self.basis, values)
    }

    /// [`fit`](Self::fit) applied to a real function sampled on the nodes.
    pub fn fit_fn(&self, g: impl Fn(f64) -> f64) -> Result<Vec<C>, NumericsError> {
        let values: Vec<C> = self.nodes.iter().map(|&x| C::new(g(x), 0.0)).collect();
        self.fit(&values)
    }
}

/// `d(c, c′) = ‖c − c′‖_FE`.
#[derive(Debug, Clone)]
pub struct FeMetric {
    grid: Arc<FourierExtensionGrid>,
}

impl FeMetric {
    pub fn new(grid: Arc<FourierExtensionGrid>) -> Self {
        Self { grid }
    }
}

impl Metric<C> for FeMetric {
    fn name(&self) -> &str {
        "fourier-extension"
    }

    fn distance(&self, x: &[C], y: &[C]) -> f64 {
        let diff: Vec<C> = x.iter().zip(y).map(|(a, b)| a - b).collect();
        self.grid.fe_norm(&diff)
    }

    /// `EᴴE(x − y) / ((m+1)·d)`.
    fn distance_gradient(&self, x: &[C], y: &[C], d: f64) -> Vec<C> {
        let diff: Vec<C> = x.iter().zip(y).map(|(a, b)| a - b).collect();
        let ev = self.grid.evaluate(&diff);
        let s = 1.0 / ((self.grid.num_nodes() as f64) * d);
        self.grid.adjoint(&ev).into_iter().map(|z| z * s).collect()
    }

    fn norm(&self, y: &[C]) -> f64 {
        self.grid.fe_norm(y)
    }
}
