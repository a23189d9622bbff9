//! Named problems and methods selectable from a config file.

use std::fmt;
use std::str::FromStr;

use deflsq_core::prelude::*;
use deflsq_core::problems::MN12_PLANTED_DEFAULT;

use crate::config::{parse_vector_literal, ExperimentConfig, InitialGuess};
use crate::error::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProblemKind {
    Himmelblau,
    FTrig,
    Bratu,
    Carrier,
    Mn12,
}

impl ProblemKind {
    pub const ALL: [ProblemKind; 5] = [
        ProblemKind::Himmelblau,
        ProblemKind::FTrig,
        ProblemKind::Bratu,
        ProblemKind::Carrier,
        ProblemKind::Mn12,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProblemKind::Himmelblau => "himmelblau",
            ProblemKind::FTrig => "ftrig",
            ProblemKind::Bratu => "bratu",
            ProblemKind::Carrier => "carrier",
            ProblemKind::Mn12 => "mn12",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            ProblemKind::Himmelblau => "Himmelblau's function as a 2x2 root system (4 roots)",
            ProblemKind::FTrig => "2-D trig-product least squares, 42 minima / 143 stationary points",
            ProblemKind::Bratu => "u'' + 3exp(u) = 0 by Fourier-extension collocation (complex)",
            ProblemKind::Carrier => "0.05u'' + 8x(1-x)u + u^2 = 1 by Fourier-extension collocation (complex)",
            ProblemKind::Mn12 => "spin-10 Stevens-operator inverse eigenvalue problem, 21 levels",
        }
    }

    /// Config keys the problem reads, with defaults.
    pub fn parameters(self) -> &'static str {
        match self {
            ProblemKind::Himmelblau => "-",
            ProblemKind::FTrig => "a = 10",
            ProblemKind::Bratu | ProblemKind::Carrier => "n = 100, m = 400",
            ProblemKind::Mn12 => "planted = [-0.05, -2.6e-5, 0.014, -9.8e-4]",
        }
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProblemKind {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ProblemKind::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = ProblemKind::ALL.iter().map(|p| p.name()).collect();
                HarnessError::Config(format!(
                    "unknown problem `{s}`; valid problems: {}",
                    names.join(", ")
                ))
            })
    }
}

/// A solver driven by the deflation loop, or the random-restart baseline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodKind {
    Solver(Method),
    Multistart,
}

impl MethodKind {
    pub fn all() -> Vec<MethodKind> {
        Method::ALL
            .into_iter()
            .map(MethodKind::Solver)
            .chain([MethodKind::Multistart])
            .collect()
    }

    pub fn name(self) -> &'static str {
        match self {
            MethodKind::Solver(m) => m.name(),
            MethodKind::Multistart => "multistart",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            MethodKind::Solver(m) => m.description(),
            MethodKind::Multistart => "Gauss-Newton from n_starts uniform random points in a box",
        }
    }
}

impl FromStr for MethodKind {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MethodKind::all()
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = MethodKind::all().iter().map(|m| m.name()).collect();
                HarnessError::Config(format!(
                    "unknown method `{s}`; valid methods: {}",
                    names.join(", ")
                ))
            })
    }
}

/// A constructed problem.
#[derive(Debug, Clone)]
pub enum ProblemInstance {
    Himmelblau(Himmelblau),
    FTrig(FTrig),
    Bvp(BvpProblem),
    Iep(IepProblem),
}

impl ProblemInstance {
    pub fn build(config: &ExperimentConfig) -> Result<Self, HarnessError> {
        Ok(match config.problem_kind()? {
            ProblemKind::Himmelblau => ProblemInstance::Himmelblau(Himmelblau),
            ProblemKind::FTrig => ProblemInstance::FTrig(ftrig(config.a.unwrap_or(10.0))?),
            ProblemKind::Bratu => {
                ProblemInstance::Bvp(bratu_problem(config.n.unwrap_or(100), config.m.unwrap_or(400))?)
            }
            ProblemKind::Carrier => ProblemInstance::Bvp(carrier_problem(
                config.n.unwrap_or(100),
                config.m.unwrap_or(400),
            )?),
            ProblemKind::Mn12 => {
                ProblemInstance::Iep(mn12_problem(config.planted.unwrap_or(MN12_PLANTED_DEFAULT))?)
            }
        })
    }

    /// Identifies the problem and its parameters, for comparing configs.
    pub fn signature(config: &ExperimentConfig) -> String {
        match config.problem_kind() {
            Ok(ProblemKind::FTrig) => format!("ftrig(a={})", config.a.unwrap_or(10.0)),
            Ok(ProblemKind::Bratu | ProblemKind::Carrier) => format!(
                "{}(n={}, m={})",
                config.problem,
                config.n.unwrap_or(100),
                config.m.unwrap_or(400)
            ),
            Ok(ProblemKind::Mn12) => format!(
                "mn12(planted={:?})",
                config.planted.unwrap_or(MN12_PLANTED_DEFAULT)
            ),
            _ => config.problem.clone(),
        }
    }
}

/// Default starting points when `x0` is absent.
pub const MN12_DEFAULT_START: [f64; 4] = [-0.045, -2e-5, 0.005, -9e-4];

pub fn real_initial_guess(
    kind: ProblemKind,
    guess: Option<&InitialGuess>,
    dim: usize,
) -> Result<Vec<f64>, HarnessError> {
    let x = match guess {
        None => match kind {
            ProblemKind::Himmelblau => vec![1.0, 1.0],
            ProblemKind::FTrig => vec![1.0, 3.0],
            ProblemKind::Mn12 => MN12_DEFAULT_START.to_vec(),
            ProblemKind::Bratu | ProblemKind::Carrier => vec![0.0; dim],
        },
        Some(InitialGuess::Vector(v)) => v.clone(),
        Some(InitialGuess::Named(name)) if name == "zero" => vec![0.0; dim],
        Some(InitialGuess::Named(name)) => parse_vector_literal(name).ok_or_else(|| {
            HarnessError::Config(format!(
                "initial guess `{name}` is neither a vector nor a preset valid for {kind}"
            ))
        })?,
    };
    if x.len() != dim {
        return Err(HarnessError::Config(format!(
            "initial guess has {} entries, {kind} needs {dim}",
            x.len()
        )));
    }
    Ok(x)
}

/// Coefficient vector for the BVPs: `zero`, `x(1-x)`, or explicit real
/// coefficients.
pub fn bvp_initial_guess(
    problem: &BvpProblem,
    guess: Option<&InitialGuess>,
) -> Result<Vec<Complex64>, HarnessError> {
    match guess {
        Some(InitialGuess::Named(name)) if name.replace(' ', "") == "x(1-x)" => {
            Ok(problem.coefficients_of(|x| x * (1.0 - x))?)
        }
        other => {
            let kind = match problem.kind() {
                deflsq_core::problems::BvpKind::Bratu => ProblemKind::Bratu,
                deflsq_core::problems::BvpKind::Carrier => ProblemKind::Carrier,
            };
            let re = real_initial_guess(kind, other, problem.num_params())?;
            Ok(re.into_iter().map(|v| Complex64::new(v, 0.0)).collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_names_list_valid_ones() {
        let err = "nope".parse::<MethodKind>().unwrap_err().to_string();
        for m in MethodKind::all() {
            assert!(err.contains(m.name()), "{err}");
        }
        let err = "nope".parse::<ProblemKind>().unwrap_err().to_string();
        assert!(err.contains("ftrig") && err.contains("mn12"));
    }

    #[test]
    fn presets() {
        let x = real_initial_guess(
            ProblemKind::FTrig,
            Some(&InitialGuess::Named("[1;3]".into())),
            2,
        )
        .unwrap();
        assert_eq!(x, vec![1.0, 3.0]);
        assert!(real_initial_guess(ProblemKind::FTrig, Some(&InitialGuess::Vector(vec![1.0])), 2).is_err());

        let p = bratu_problem(20, 40).unwrap();
        let c = bvp_initial_guess(&p, Some(&InitialGuess::Named("x(1-x)".into()))).unwrap();
        let u = p.grid_values(&c);
        for (k, uk) in u.iter().enumerate() {
            let x = k as f64 / 40.0;
            assert!((uk.re - x * (1.0 - x)).abs() < 1e-8, "{k}: {uk}");
        }
    }
}
