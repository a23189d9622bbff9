use super::LineSearchConfig;

/// Relative slack on the Armijo test. Near a nonzero-residual minimum the
/// predicted decrease `c₁·α·slope` drops below the rounding error in `f`, and
/// an exact test would reject every step.
pub const ARMIJO_ROUNDING_SLACK: f64 = 16.0 * f64::EPSILON;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineSearchStep {
    pub alpha: f64,
    pub value: f64,
    pub trials: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
#[error("no sufficient decrease after {trials} trials (last alpha {alpha:e})")]
pub struct LineSearchFailure {
    pub alpha: f64,
    pub trials: usize,
}

/// Whether `f(α) ≤ f(0) + c₁·α·slope`, up to [`ARMIJO_ROUNDING_SLACK`].
pub fn armijo_holds(f0: f64, slope: f64, alpha: f64, value: f64, c1: f64) -> bool {
    value.is_finite() && value <= f0 + c1 * alpha * slope + ARMIJO_ROUNDING_SLACK * f0.abs()
}

/// Backtracking on `φ(α) = f(x + αp)` from `α = 1`.
///
/// A rejected trial is replaced by the minimizer of the quadratic through
/// `φ(0)`, `φ'(0) = slope` and `φ(α)`, clamped to `[0.1α, 0.5α]`. Non-finite
/// trial values shrink `α` by the lower clamp.
pub fn quadratic_line_search(
    mut phi: impl FnMut(f64) -> f64,
    f0: f64,
    slope: f64,
    config: &LineSearchConfig,
) -> Result<LineSearchStep, LineSearchFailure> {
    let mut alpha = 1.0;
    for trials in 1..=config.max_trials {
        let value = phi(alpha);
        if armijo_holds(f0, slope, alpha, value, config.c1) {
            return Ok(LineSearchStep {
                alpha,
                value,
                trials,
            });
        }
        let curvature = value - f0 - slope * alpha;
        let next = if value.is_finite() && curvature > 0.0 {
            -slope * alpha * alpha / (2.0 * curvature)
        } else {
            0.1 * alpha
        };
        alpha = next.max(0.1 * alpha).min(0.5 * alpha);
        if alpha < config.alpha_min {
            return Err(LineSearchFailure { alpha, trials });
        }
    }
    Err(LineSearchFailure {
        alpha,
        trials: config.max_trials,
    })
}
