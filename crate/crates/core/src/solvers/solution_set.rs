use alloc::vec::Vec;

use crate::deflation::Metric;
use crate::scalar::Scalar;

/// Two points are the same solution when `d(x, y) ≤ tol·(1 + ‖y‖)`.
pub const DEFAULT_DEDUPE_TOL: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Solution<S> {
    pub x: Vec<S>,
    pub residual_norm: f64,
    pub objective: f64,
    pub grad_norm: f64,
    /// Deflation round or multistart index that produced it.
    pub source: usize,
    pub iterations: usize,
    pub residual_evals: usize,
    pub jacobian_evals: usize,
}

/// Distinct solutions in discovery order.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SolutionSet<S> {
    pub tol: f64,
    pub entries: Vec<Solution<S>>,
}

impl<S> Default for SolutionSet<S> {
    fn default() -> Self {
        Self::new(DEFAULT_DEDUPE_TOL)
    }
}

impl<S> SolutionSet<S> {
    pub fn new(tol: f64) -> Self {
        Self {
            tol,
            entries: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Solution<S>> {
        self.entries.iter()
    }
}

impl<S: Scalar> SolutionSet<S> {
    /// Index of an existing entry matching `x`.
    pub fn find(&self, x: &[S], metric: &dyn Metric<S>) -> Option<usize> {
        self.entries.iter().position(|e| {
            metric.distance(x, &e.x) <= self.tol * (1.0 + metric.norm(&e.x))
        })
    }

    /// Adds `solution` unless it duplicates an entry; returns its index if new.
    pub fn insert(&mut self, solution: Solution<S>, metric: &dyn Metric<S>) -> Option<usize> {
        if self.find(&solution.x, metric).is_some() {
            return None;
        }
        self.entries.push(solution);
        Some(self.entries.len() - 1)
    }

    pub fn points(&self) -> Vec<Vec<S>> {
        self.entries.iter().map(|e| e.x.clone()).collect()
    }
}

/// Greedy clustering: each point joins the first earlier representative within
/// `tol·(1 + ‖representative‖)`, otherwise it becomes one.
pub fn dedupe<S: Scalar>(points: &[Vec<S>], tol: f64, metric: &dyn Metric<S>) -> Vec<Vec<S>> {
    let mut reps: Vec<Vec<S>> = Vec::new();
    for p in points {
        let dup = reps
            .iter()
            .any(|r| metric.distance(p, r) <= tol * (1.0 + metric.norm(r)));
        if !dup {
            reps.push(p.clone());
        }
    }
    reps
}
