//! Benchmark problems.

mod bvp;
mod ftrig;
mod himmelblau;
mod spin;

pub use bvp::{bratu_problem, carrier_problem, BvpKind, BvpProblem};
pub use ftrig::{ftrig, FTrig};
pub use himmelblau::{himmelblau, Himmelblau};
pub use spin::{
    iep_problem, mn12_problem, stevens_operators, IepProblem, StevensOperators,
    MN12_PLANTED_DEFAULT,
};
