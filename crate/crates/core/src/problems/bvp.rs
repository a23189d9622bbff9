//! Fourier-extension collocation of two-point boundary value problems on
//! `[0, 1]` with `u(0) = u(1) = 0`:
//!
//! * Bratu: `u'' + 3·exp(u) = 0`
//! * Carrier: `0.05·u'' + 8x(1 − x)·u + u² = 1`
//!
//! Rows `0..=m` enforce the ODE at the nodes, scaled by `1/√(m+1)` so that
//! `½‖r‖²` averages over the grid; the last two rows are `u(0)` and `u(1)`.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::PI;

// Float math for toolchains whose `core` lacks it.
#[allow(unused_imports)]
use num_traits::Float;

use crate::deflation::Metric;
use crate::fourier::{FeMetric, FourierExtensionGrid};
use crate::numerics::DenseMatrix;
use crate::problem::{Problem, ProblemError};
use crate::scalar::{self, Complex64, Scalar};

type C = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BvpKind {
    Bratu,
    Carrier,
}

impl BvpKind {
    /// Coefficient of `u''`.
    fn diffusion(self) -> f64 {
        match self {
            BvpKind::Bratu => 1.0,
            BvpKind::Carrier => 0.05,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BvpProblem {
    kind: BvpKind,
    grid: Arc<FourierExtensionGrid>,
    name: String,
    /// `−j²π²` per coefficient slot.
    second_derivative: Vec<f64>,
    /// `8x(1 − x)` per node, Carrier only.
    potential: Vec<f64>,
    row_scale: f64,
}

pub fn bratu_problem(n: usize, m: usize) -> Result<BvpProblem, ProblemError> {
    BvpProblem::new(BvpKind::Bratu, n, m)
}

pub fn carrier_problem(n: usize, m: usize) -> Result<BvpProblem, ProblemError> {
    BvpProblem::new(BvpKind::Carrier, n, m)
}

impl BvpProblem {
    pub fn new(kind: BvpKind, n: usize, m: usize) -> Result<Self, ProblemError> {
        let grid = FourierExtensionGrid::new(n, m).map_err(|_| {
            ProblemError::InvalidParameters(format!("need n >= 1 and m >= 2n, got n={n}, m={m}"))
        })?;
        let second_derivative = (0..grid.num_coefficients())
            .map(|i| {
                let j = grid.frequency(i) as f64;
                -j * j * PI * PI
            })
            .collect();
        let potential = match kind {
            BvpKind::Bratu => Vec::new(),
            BvpKind::Carrier => grid.nodes().iter().map(|&x| 8.0 * x * (1.0 - x)).collect(),
        };
        let name = match kind {
            BvpKind::Bratu => "bratu",
            BvpKind::Carrier => "carrier",
        };
        Ok(Self {
            kind,
            row_scale: 1.0 / ((m + 1) as f64).sqrt(),
            grid: Arc::new(grid),
            name: name.into(),
            second_derivative,
            potential,
        })
    }

    pub fn kind(&self) -> BvpKind {
        self.kind
    }

    pub fn grid(&self) -> &Arc<FourierExtensionGrid> {
        &self.grid
    }

    /// `u(x_k)` for coefficients `c`.
    pub fn grid_values(&self, c: &[C]) -> Vec<C> {
        self.grid.evaluate(c)
    }

    /// Coefficients whose extension interpolates `g` on the grid in the
    /// least-squares sense.
    pub fn coefficients_of(&self, g: impl Fn(f64) -> f64) -> Result<Vec<C>, ProblemError> {
        Ok(self.grid.fit_fn(g)?)
    }

    /// `u(0)` and `u(1)`.
    pub fn boundary_values(&self, c: &[C]) -> (C, C) {
        let mut left = C::zero();
        let mut right = C::zero();
        for (i, &cj) in c.iter().enumerate() {
            left += cj;
            if self.grid.frequency(i) % 2 == 0 {
                right += cj;
            } else {
                right -= cj;
            }
        }
        (left, right)
    }
}

impl Problem for BvpProblem {
    type Scalar = C;

    fn name(&self) -> &str {
        &self.name
    }

    fn num_params(&self) -> usize {
        self.grid.num_coefficients()
    }

    fn num_residuals(&self) -> usize {
        self.grid.num_nodes() + 2
    }

    fn residual(&self, c: &[C]) -> Result<Vec<C>, ProblemError> {
        self.check_dimension(c)?;
        let u = self.grid.evaluate(c);
        let dc: Vec<C> = c
            .iter()
            .zip(&self.second_derivative)
            .map(|(&cj, &w)| cj * w)
            .collect();
        let upp = self.grid.evaluate(&dc);
        let s = self.row_scale;
        let mut r: Vec<C> = match self.kind {
            BvpKind::Bratu => u
                .iter()
                .zip(&upp)
                .map(|(&uk, &vk)| (vk + uk.exp() * 3.0) * s)
                .collect(),
            BvpKind::Carrier => u
                .iter()
                .zip(&upp)
                .zip(&self.potential)
                .map(|((&uk, &vk), &q)| (vk * 0.05 + uk * q + uk * uk - 1.0) * s)
                .collect(),
        };
        let (left, right) = self.boundary_values(c);
        r.push(left);
        r.push(right);
        if scalar::all_finite(&r) {
            Ok(r)
        } else {
            Err(ProblemError::NonFinite)
        }
    }

    fn jacobian(&self, c: &[C]) -> Result<DenseMatrix<C>, ProblemError> {
        self.check_dimension(c)?;
        let u = self.grid.evaluate(c);
        let nodes = self.grid.num_nodes();
        // Pointwise derivative of the nonlinear term at each node.
        let local: Vec<C> = match self.kind {
            BvpKind::Bratu => u.iter().map(|&uk| uk.exp() * 3.0).collect(),
            BvpKind::Carrier => u
                .iter()
                .zip(&self.potential)
                .map(|(&uk, &q)| uk * 2.0 + q)
                .collect(),
        };
        if !scalar::all_finite(&local) {
            return Err(ProblemError::NonFinite);
        }
        let diffusion = self.kind.diffusion();
        let s = self.row_scale;
        let basis = self.grid.basis();
        let jac = DenseMatrix::from_fn(nodes + 2, self.num_params(), |k, col| {
            if k < nodes {
                basis[(k, col)] * (local[k] + diffusion * self.second_derivative[col]) * s
            } else if k == nodes || self.grid.frequency(col) % 2 == 0 {
                C::one()
            } else {
                -C::one()
            }
        });
        Ok(jac)
    }

    fn metric(&self) -> Arc<dyn Metric<C>> {
        Arc::new(FeMetric::new(self.grid.clone()))
    }
}
