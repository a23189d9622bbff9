//! Deflation methods for finding many local minima of nonlinear least squares
//! problems `min ½‖r(x)‖²`.
//!
//! The crate provides deflated Newton (rootfinding and optimization) and two
//! deflated Gauss–Newton variants, the deflation operators they share, a set of
//! benchmark problems and a random-restart baseline. It is `no_std` with
//! `alloc`; file formats and the CLI live in the companion `deflsq` crate.
//!
//! ```
//! use deflsq_core::prelude::*;
//!
//! let problem = Himmelblau;
//! let outcome = deflation_loop(
//!     Method::DeflatedNewton,
//!     &problem,
//!     &[1.0, 1.0],
//!     4,
//!     &SolverConfig::default(),
//!     DeflationState::for_problem(&problem, DeflationConfig::default()),
//!     &LoopOptions::default(),
//! )
//! .unwrap();
//! assert_eq!(outcome.solutions.len(), 4);
//! ```

#![no_std]

extern crate alloc;

pub mod deflation;
pub mod fourier;
pub mod multistart;
pub mod numerics;
pub mod problem;
pub mod problems;
pub mod scalar;
pub mod solvers;

pub mod prelude {
    pub use crate::deflation::{
        beta_field, classify_beta, DeflationConfig, DeflationState, DeflationVariant, Euclidean,
        Grid2d, Metric, Region,
    };
    pub use crate::multistart::{multistart, MultistartConfig, MultistartReport};
    pub use crate::problem::{Problem, ProblemError};
    pub use crate::problems::{
        bratu_problem, carrier_problem, ftrig, himmelblau, iep_problem, mn12_problem,
        stevens_operators, BvpProblem, FTrig, Himmelblau, IepProblem,
    };
    pub use crate::scalar::{Complex64, Field, Scalar};
    pub use crate::solvers::{
        bad_deflated_gn, deflated_newton_opt, deflated_newton_root, deflation_loop, gauss_newton,
        good_deflated_gn, newton_root, Branch, FailurePolicy, LoopOptions, LoopOutcome, Method,
        SolutionSet, SolveResult, SolveStatus, SolverConfig,
    };
}
