use alloc::string::String;
use alloc::vec::Vec;

/// Which update an iteration applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Branch {
    /// A β-scaled (or, for the bad method, rank-one corrected) step.
    Deflated,
    /// The plain step: line-searched for the Gauss–Newton family, full for
    /// Newton with no deflated points.
    Undeflated,
}

/// Quantities specific to a bad deflated Gauss–Newton step.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BadStep {
    pub omega: f64,
    /// `‖P·r‖²`, the residual component outside the range of `J`.
    pub projected_residual_sqr: f64,
    /// `Re⟨p̂, ∇η⟩` for the step actually taken; equals `β/ω − 1`.
    pub eta_dot_step: f64,
}

/// State at iterate `x_k` and the step taken from it. The terminal record of a
/// converged run has `alpha = 0`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IterationRecord<S> {
    pub k: usize,
    pub x: Vec<S>,
    pub objective: f64,
    pub residual_norm: f64,
    /// `‖Jᴴr‖`.
    pub grad_norm: f64,
    /// `‖p_k‖` of the undeflated step.
    pub step_norm: f64,
    /// `Re⟨∇η, p_k⟩`.
    pub eta_dot_p: f64,
    pub beta: f64,
    pub branch: Branch,
    pub alpha: f64,
    /// `Re⟨∇f, p_k⟩`, the slope the line search tests against.
    pub slope: f64,
    pub bad_step: Option<BadStep>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum SolveStatus {
    Converged,
    MaxIters,
    RankDeficient,
    LineSearchFailed,
    /// `β ≈ 0` (or `ω ≈ 0`), so the deflated step does not exist.
    StepUndefined,
    /// The residual or Jacobian could not be evaluated, e.g. overflow or a
    /// repeated eigenvalue.
    EvaluationFailed,
}

impl SolveStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveStatus::Converged => "converged",
            SolveStatus::MaxIters => "max-iters",
            SolveStatus::RankDeficient => "rank-deficient",
            SolveStatus::LineSearchFailed => "line-search-failed",
            SolveStatus::StepUndefined => "step-undefined",
            SolveStatus::EvaluationFailed => "evaluation-failed",
        }
    }
}

impl core::fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SolveResult<S> {
    pub status: SolveStatus,
    pub x: Vec<S>,
    pub trace: Vec<IterationRecord<S>>,
    pub residual_evals: usize,
    pub jacobian_evals: usize,
    pub hessian_evals: usize,
    pub message: Option<String>,
}

impl<S> SolveResult<S> {
    pub fn converged(&self) -> bool {
        self.status == SolveStatus::Converged
    }

    /// Steps taken, excluding the terminal record.
    pub fn iterations(&self) -> usize {
        match self.trace.last() {
            Some(r) if self.converged() && r.alpha == 0.0 => self.trace.len() - 1,
            _ => self.trace.len(),
        }
    }

    pub fn last(&self) -> Option<&IterationRecord<S>> {
        self.trace.last()
    }
}
