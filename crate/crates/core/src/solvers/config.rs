/// Armijo backtracking with quadratic interpolation.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct LineSearchConfig {
    /// Sufficient-decrease constant `c₁`.
    pub c1: f64,
    /// Give up once `α` falls below this.
    pub alpha_min: f64,
    pub max_trials: usize,
}

impl Default for LineSearchConfig {
    fn default() -> Self {
        Self {
            c1: 1e-4,
            alpha_min: 1e-12,
            max_trials: 50,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default))]
pub struct SolverConfig {
    /// Stopping tolerance on `‖p‖` (Gauss–Newton family), `‖r‖` (Newton
    /// rootfinding) or `‖∇f‖` (Newton for optimization).
    pub step_tol: f64,
    pub max_iters: usize,
    /// The deflated step is taken only when `Re⟨∇η, p⟩ > epsilon`.
    pub epsilon: f64,
    pub line_search: LineSearchConfig,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            step_tol: 1e-10,
            max_iters: 500,
            epsilon: 0.01,
            line_search: LineSearchConfig::default(),
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), super::SolverError> {
        let bad = |msg| Err(super::SolverError::InvalidConfig(msg));
        if !(self.step_tol > 0.0 && self.step_tol.is_finite()) {
            return bad("step_tol must be positive");
        }
        if !(0.0..=1.0).contains(&self.epsilon) {
            return bad("epsilon must lie in [0, 1]");
        }
        let ls = &self.line_search;
        if !(ls.c1 > 0.0 && ls.c1 < 1.0) {
            return bad("line-search c1 must lie in (0, 1)");
        }
        if !(ls.alpha_min > 0.0 && ls.alpha_min < 1.0) {
            return bad("line-search alpha_min must lie in (0, 1)");
        }
        if ls.max_trials == 0 {
            return bad("line-search max_trials must be at least 1");
        }
        Ok(())
    }
}
