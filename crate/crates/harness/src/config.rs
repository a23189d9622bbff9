//! Flat TOML experiment configuration.
//!
//! Every key is optional; missing keys take the defaults below or the
//! problem's own defaults. `key=value` overrides from the command line are
//! applied to the parsed table before it is deserialized, so they accept the
//! same TOML value syntax as the file.

use std::path::{Path, PathBuf};

use deflsq_core::deflation::{DeflationConfig, DeflationVariant};
use deflsq_core::solvers::{FailurePolicy, LineSearchConfig, LoopOptions, SolverConfig};
use serde::{Deserialize, Serialize};

use crate::error::HarnessError;
use crate::registry::{MethodKind, ProblemKind};

/// Environment variable naming the directory that relative output paths are
/// resolved against.
pub const OUTPUT_ROOT_ENV: &str = "DEFLSQ_OUTPUT_ROOT";
pub const DEFAULT_OUTPUT_ROOT: &str = "runs";

/// Starting point: an explicit vector or a named preset (`"zero"`,
/// `"x(1-x)"`, or a bracketed literal such as `"[1;3]"`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InitialGuess {
    Vector(Vec<f64>),
    Named(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problem: String,
    pub method: String,
    /// Free-form name used in comparison tables; defaults to the method.
    pub label: Option<String>,
    pub rounds: usize,
    pub x0: Option<InitialGuess>,

    /// FTrig height.
    pub a: Option<f64>,
    /// Fourier-extension degree and grid size for the BVPs.
    pub n: Option<usize>,
    pub m: Option<usize>,
    /// Planted `(B20, B40, B22, B44)` for `mn12`.
    pub planted: Option<[f64; 4]>,

    pub theta: f64,
    pub sigma: f64,
    pub deflation: DeflationVariant,

    pub step_tol: f64,
    pub max_iters: usize,
    pub epsilon: f64,
    pub c1: f64,
    pub alpha_min: f64,
    pub max_trials: usize,

    pub on_failure: FailurePolicy,
    pub dedupe_tol: f64,

    /// Multistart only.
    pub seed: u64,
    pub n_starts: usize,
    /// Sampling box; defaults to the problem's bounds.
    pub bounds: Option<Vec<[f64; 2]>>,

    /// β-field grid.
    pub grid_nx: usize,
    pub grid_ny: usize,
    pub x_range: Option<[f64; 2]>,
    pub y_range: Option<[f64; 2]>,
    /// Deflated points for the β-field; when absent the experiment is run and
    /// its solutions are used.
    pub beta_points: Option<Vec<Vec<f64>>>,
    /// Use only the first this-many solutions as deflated points.
    pub beta_deflations: Option<usize>,

    pub output_dir: Option<PathBuf>,
    /// Run `compare` members on separate threads.
    pub parallel: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let solver = SolverConfig::default();
        let deflation = DeflationConfig::default();
        let options = LoopOptions::default();
        Self {
            problem: String::new(),
            method: String::new(),
            label: None,
            rounds: 1,
            x0: None,
            a: None,
            n: None,
            m: None,
            planted: None,
            theta: deflation.theta,
            sigma: deflation.sigma,
            deflation: deflation.variant,
            step_tol: solver.step_tol,
            max_iters: solver.max_iters,
            epsilon: solver.epsilon,
            c1: solver.line_search.c1,
            alpha_min: solver.line_search.alpha_min,
            max_trials: solver.line_search.max_trials,
            on_failure: options.on_failure,
            dedupe_tol: options.dedupe_tol,
            seed: 0,
            n_starts: 300,
            bounds: None,
            grid_nx: 201,
            grid_ny: 201,
            x_range: None,
            y_range: None,
            beta_points: None,
            beta_deflations: None,
            output_dir: None,
            parallel: false,
        }
    }
}

impl ExperimentConfig {
    /// Reads `path` and applies `overrides` (`key=value`, value in TOML syntax;
    /// bare words are taken as strings).
    pub fn load(path: &Path, overrides: &[String]) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml_str(&text, overrides)
    }

    pub fn from_toml_str(text: &str, overrides: &[String]) -> Result<Self, HarnessError> {
        let mut table: toml::Table = text.parse().map_err(|e: toml::de::Error| {
            HarnessError::Config(format!("invalid TOML: {}", e.message()))
        })?;
        for item in overrides {
            let (key, value) = parse_override(item)?;
            table.insert(key, value);
        }
        let config: Self = table
            .try_into()
            .map_err(|e: toml::de::Error| HarnessError::Config(e.message().to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes to TOML")
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |msg: String| Err(HarnessError::Config(msg));
        self.problem_kind()?;
        self.method_kind()?;
        if self.rounds == 0 {
            return bad("rounds must be at least 1".into());
        }
        if self.n_starts == 0 {
            return bad("n_starts must be at least 1".into());
        }
        if !(self.dedupe_tol > 0.0 && self.dedupe_tol.is_finite()) {
            return bad("dedupe_tol must be positive".into());
        }
        if self.grid_nx < 2 || self.grid_ny < 2 {
            return bad("grid_nx and grid_ny must be at least 2".into());
        }
        for (name, range) in [("x_range", self.x_range), ("y_range", self.y_range)] {
            if let Some([lo, hi]) = range {
                if !(lo < hi && lo.is_finite() && hi.is_finite()) {
                    return bad(format!("{name} must satisfy lo < hi"));
                }
            }
        }
        self.solver_config()
            .validate()
            .map_err(|e| HarnessError::Config(e.to_string()))?;
        self.deflation_config()
            .validate()
            .map_err(|e| HarnessError::Config(e.to_string()))?;
        Ok(())
    }

    pub fn problem_kind(&self) -> Result<ProblemKind, HarnessError> {
        self.problem.parse()
    }

    pub fn method_kind(&self) -> Result<MethodKind, HarnessError> {
        self.method.parse()
    }

    pub fn label(&self) -> String {
        self.label.clone().unwrap_or_else(|| self.method.clone())
    }

    pub fn solver_config(&self) -> SolverConfig {
        SolverConfig {
            step_tol: self.step_tol,
            max_iters: self.max_iters,
            epsilon: self.epsilon,
            line_search: LineSearchConfig {
                c1: self.c1,
                alpha_min: self.alpha_min,
                max_trials: self.max_trials,
            },
        }
    }

    pub fn deflation_config(&self) -> DeflationConfig {
        DeflationConfig {
            theta: self.theta,
            sigma: self.sigma,
            variant: self.deflation,
        }
    }

    pub fn loop_options(&self) -> LoopOptions {
        LoopOptions {
            on_failure: self.on_failure,
            dedupe_tol: self.dedupe_tol,
        }
    }

    /// `output_dir` resolved against the output root, or
    /// `<root>/<problem>-<label>` when unset.
    pub fn resolved_output_dir(&self, root: &Path) -> PathBuf {
        match &self.output_dir {
            Some(dir) if dir.is_absolute() => dir.clone(),
            Some(dir) => root.join(dir),
            None => root.join(format!("{}-{}", self.problem, self.label())),
        }
    }
}

/// The output root from [`OUTPUT_ROOT_ENV`], falling back to `runs`.
pub fn output_root() -> PathBuf {
    std::env::var_os(OUTPUT_ROOT_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_ROOT))
}

fn parse_override(item: &str) -> Result<(String, toml::Value), HarnessError> {
    let (key, raw) = item
        .split_once('=')
        .ok_or_else(|| HarnessError::Config(format!("override `{item}` is not key=value")))?;
    let key = key.trim();
    let raw = raw.trim();
    if key.is_empty() {
        return Err(HarnessError::Config(format!("override `{item}` has an empty key")));
    }
    let value = format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()));
    Ok((key.to_string(), value))
}

/// Parses `"[1;3]"`, `"[1, 3]"` or `"1 3"` into a vector.
pub fn parse_vector_literal(text: &str) -> Option<Vec<f64>> {
    let inner = text.trim().trim_start_matches('[').trim_end_matches(']');
    let values: Result<Vec<f64>, _> = inner
        .split(|c: char| c == ';' || c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(str::parse)
        .collect();
    values.ok().filter(|v| !v.is_empty())
}
