//! Deflation operators μ(x; y₁…yₙ) and their logarithmic gradients ∇η = ∇μ/μ.
//!
//! Solvers never need μ itself, only ∇η and the scalar β = 1 − ⟨∇η, p⟩ it
//! induces for an undeflated step `p`.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Debug;

// Float math for toolchains whose `core` lacks it.
#[allow(unused_imports)]
use num_traits::Float;

use crate::numerics::lsq_min_norm;
use crate::problem::Problem;
use crate::scalar::{self, Scalar};

/// A distance `d(x, y)` together with its gradient in `x`.
///
/// For complex vectors the gradient is packed as `∂d/∂Re xⱼ + i·∂d/∂Im xⱼ`, so
/// that `Re⟨∇d, p⟩` is the directional derivative along `p`.
pub trait Metric<S>: Send + Sync + Debug {
    fn name(&self) -> &str;
    fn distance(&self, x: &[S], y: &[S]) -> f64;
    /// `∇ₓ d(x, y)`, given `d = distance(x, y) > 0`.
    fn distance_gradient(&self, x: &[S], y: &[S], d: f64) -> Vec<S>;

    fn norm(&self, y: &[S]) -> f64
    where
        S: Scalar,
    {
        self.distance(y, &vec![S::zero(); y.len()])
    }
}

/// The Euclidean 2-norm distance.
#[derive(Debug, Clone, Copy, Default)]
pub struct Euclidean;

impl<S: Scalar> Metric<S> for Euclidean {
    fn name(&self) -> &str {
        "euclidean"
    }

    fn distance(&self, x: &[S], y: &[S]) -> f64 {
        let diff: Vec<S> = x.iter().zip(y).map(|(&a, &b)| a - b).collect();
        scalar::norm(&diff)
    }

    fn distance_gradient(&self, x: &[S], y: &[S], d: f64) -> Vec<S> {
        x.iter().zip(y).map(|(&a, &b)| (a - b).scale(1.0 / d)).collect()
    }

    fn norm(&self, y: &[S]) -> f64 {
        scalar::norm(y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum DeflationVariant {
    /// `∏ᵢ (σ + d(x, yᵢ)^−θ)`
    #[default]
    MultiShift,
    /// `σ + ∏ᵢ d(x, yᵢ)^−θ`
    SingleShift,
    /// `∏ᵢ exp(1/d(x, yᵢ))`; θ and σ are ignored.
    Exponential,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DeflationConfig {
    pub theta: f64,
    pub sigma: f64,
    pub variant: DeflationVariant,
}

impl Default for DeflationConfig {
    fn default() -> Self {
        Self {
            theta: 2.0,
            sigma: 1.0,
            variant: DeflationVariant::MultiShift,
        }
    }
}

impl DeflationConfig {
    pub fn validate(&self) -> Result<(), DeflationError> {
        if !(self.theta > 0.0 && self.theta.is_finite()) {
            return Err(DeflationError::InvalidConfig("theta must be positive and finite"));
        }
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return Err(DeflationError::InvalidConfig("sigma must be nonnegative and finite"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DeflationError {
    #[error("x coincides with deflated point {index}")]
    AtDeflatedPoint { index: usize },
    #[error("expected a point of dimension {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("invalid deflation config: {0}")]
    InvalidConfig(&'static str),
}

/// Relative distance below which `x` counts as sitting on a deflated point.
pub const AT_POINT_TOLERANCE: f64 = 1e-13;

/// μ, log μ and ∇η at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct DeflationEval<S> {
    pub mu: f64,
    pub log_mu: f64,
    pub grad_eta: Vec<S>,
}

/// A set of deflated points with the operator applied to them. Immutable:
/// [`DeflationState::with_point`] returns a new state.
#[derive(Debug, Clone)]
pub struct DeflationState<S> {
    config: DeflationConfig,
    metric: Arc<dyn Metric<S>>,
    points: Vec<Vec<S>>,
    thresholds: Vec<f64>,
}

impl<S: Scalar> DeflationState<S> {
    pub fn new(config: DeflationConfig, metric: Arc<dyn Metric<S>>) -> Self {
        Self {
            config,
            metric,
            points: Vec::new(),
            thresholds: Vec::new(),
        }
    }

    pub fn euclidean(config: DeflationConfig) -> Self {
        Self::new(config, Arc::new(Euclidean))
    }

    /// An empty state using the problem's own metric.
    pub fn for_problem<P: Problem<Scalar = S> + ?Sized>(problem: &P, config: DeflationConfig) -> Self {
        Self::new(config, problem.metric())
    }

    pub fn config(&self) -> &DeflationConfig {
        &self.config
    }

    pub fn metric(&self) -> &Arc<dyn Metric<S>> {
        &self.metric
    }

    pub fn points(&self) -> &[Vec<S>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// A new state with `y` appended. Repeated points are kept, raising the
    /// multiplicity of the pole.
    pub fn with_point(&self, y: Vec<S>) -> Result<Self, DeflationError> {
        let mut next = self.clone();
        next.push(y)?;
        Ok(next)
    }

    pub fn push(&mut self, y: Vec<S>) -> Result<(), DeflationError> {
        if let Some(first) = self.points.first() {
            check_dim(first.len(), y.len())?;
        }
        self.thresholds
            .push(AT_POINT_TOLERANCE * (1.0 + self.metric.norm(&y)));
        self.points.push(y);
        Ok(())
    }

    fn distances(&self, x: &[S]) -> Result<Vec<f64>, DeflationError> {
        self.points
            .iter()
            .zip(&self.thresholds)
            .enumerate()
            .map(|(index, (y, &tol))| {
                check_dim(y.len(), x.len())?;
                let d = self.metric.distance(x, y);
                if d < tol || d == 0.0 {
                    Err(DeflationError::AtDeflatedPoint { index })
                } else {
                    Ok(d)
                }
            })
            .collect()
    }

    pub fn mu_value(&self, x: &[S]) -> Result<f64, DeflationError> {
        Ok(self.evaluate(x)?.mu)
    }

    pub fn grad_eta(&self, x: &[S]) -> Result<Vec<S>, DeflationError> {
        Ok(self.evaluate(x)?.grad_eta)
    }

    /// μ, log μ and ∇η in one pass over the points.
    pub fn evaluate(&self, x: &[S]) -> Result<DeflationEval<S>, DeflationError> {
        let mut grad = vec![S::zero(); x.len()];
        if self.points.is_empty() {
            return Ok(DeflationEval {
                mu: 1.0,
                log_mu: 0.0,
                grad_eta: grad,
            });
        }
        let ds = self.distances(x)?;
        let DeflationConfig { theta, sigma, variant } = self.config;
        let log_mu = match variant {
            DeflationVariant::MultiShift => {
                let mut log_mu = 0.0;
                for (y, &d) in self.points.iter().zip(&ds) {
                    // ln(σ + d^−θ) and −θ·∇d / (d·(1 + σ·d^θ)), overflow-free.
                    let sd = sigma * d.powf(theta);
                    log_mu += -theta * d.ln() + sd.ln_1p();
                    let w = -theta / (d * (1.0 + sd));
                    let gd = self.metric.distance_gradient(x, y, d);
                    scalar::axpy(S::from_real(w), &gd, &mut grad);
                }
                log_mu
            }
            DeflationVariant::SingleShift => {
                let log_p: f64 = -theta * ds.iter().map(|d| d.ln()).sum::<f64>();
                // P/(σ + P) weights the sum of per-point log-gradients.
                let weight = 1.0 / (1.0 + sigma * Float::exp(-log_p));
                for (y, &d) in self.points.iter().zip(&ds) {
                    let gd = self.metric.distance_gradient(x, y, d);
                    scalar::axpy(S::from_real(-theta * weight / d), &gd, &mut grad);
                }
                if log_p > 0.0 {
                    log_p + (sigma * Float::exp(-log_p)).ln_1p()
                } else {
                    (sigma + Float::exp(log_p)).ln()
                }
            }
            DeflationVariant::Exponential => {
                let mut log_mu = 0.0;
                for (y, &d) in self.points.iter().zip(&ds) {
                    log_mu += 1.0 / d;
                    let gd = self.metric.distance_gradient(x, y, d);
                    scalar::axpy(S::from_real(-1.0 / (d * d)), &gd, &mut grad);
                }
                log_mu
            }
        };
        Ok(DeflationEval {
            mu: Float::exp(log_mu),
            log_mu,
            grad_eta: grad,
        })
    }

    /// β = 1 − Re⟨∇η(x), p⟩.
    pub fn beta(&self, x: &[S], p: &[S]) -> Result<f64, DeflationError> {
        Ok(1.0 - scalar::real_dot(&self.grad_eta(x)?, p))
    }
}

fn check_dim(expected: usize, found: usize) -> Result<(), DeflationError> {
    if expected == found {
        Ok(())
    } else {
        Err(DeflationError::Dimension { expected, found })
    }
}

/// Regular lattice over a rectangle, nodes ordered with `x` varying fastest.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Grid2d {
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub nx: usize,
    pub ny: usize,
}

impl Grid2d {
    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn node(&self, index: usize) -> [f64; 2] {
        let (i, j) = (index % self.nx, index / self.nx);
        [
            lerp(self.x_range, i, self.nx),
            lerp(self.y_range, j, self.ny),
        ]
    }
}

fn lerp((lo, hi): (f64, f64), i: usize, n: usize) -> f64 {
    if n <= 1 {
        lo
    } else {
        lo + (hi - lo) * (i as f64) / ((n - 1) as f64)
    }
}

/// Which step a deflated Gauss–Newton iteration takes at a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Region {
    /// `β ≥ 1 − ε`: the undeflated line-searched step.
    Green,
    /// `0 < β < 1 − ε`: a deflated step in the direction of `p`.
    Yellow,
    /// `β ≤ 0`: a deflated step reversing `p`.
    Red,
}

pub fn classify_beta(beta: f64, epsilon: f64) -> Region {
    if beta >= 1.0 - epsilon {
        Region::Green
    } else if beta > 0.0 {
        Region::Yellow
    } else {
        Region::Red
    }
}

#[derive(Debug, Clone)]
pub struct BetaField {
    pub grid: Grid2d,
    /// `None` where the residual, step or ∇η could not be evaluated.
    pub values: Vec<Option<f64>>,
}

impl BetaField {
    pub fn regions(&self, epsilon: f64) -> Vec<Option<Region>> {
        self.values
            .iter()
            .map(|b| b.map(|b| classify_beta(b, epsilon)))
            .collect()
    }
}

/// β at every node of `grid`, using the undeflated (minimum-norm Gauss–Newton,
/// equivalently Newton for square problems) step.
pub fn beta_field<P>(problem: &P, state: &DeflationState<f64>, grid: &Grid2d) -> BetaField
where
    P: Problem<Scalar = f64> + ?Sized,
{
    let values = (0..grid.len())
        .map(|idx| {
            let x = grid.node(idx);
            let r = problem.residual(&x).ok()?;
            let j = problem.jacobian(&x).ok()?;
            let neg_r: Vec<f64> = r.iter().map(|v| -v).collect();
            let p = lsq_min_norm(&j, &neg_r).ok()?;
            let beta = state.beta(&x, &p).ok()?;
            beta.is_finite().then_some(beta)
        })
        .collect();
    BetaField { grid: *grid, values }
}
