//! CSV writers. Every file starts with a header row; floats use Rust's
//! shortest round-trip formatting.

use std::path::Path;

use deflsq_core::multistart::StartRecord;
use deflsq_core::prelude::*;
use deflsq_core::solvers::IterationRecord;

use crate::error::HarnessError;
use crate::report::{Coordinates, DiscoveryRow, ExportScalar, SolutionSummary};

pub(crate) fn num(v: f64) -> String {
    format!("{v}")
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

pub(crate) struct CsvFile<'a> {
    path: &'a Path,
    writer: csv::Writer<std::fs::File>,
}

impl<'a> CsvFile<'a> {
    pub(crate) fn create(path: &'a Path, header: &[String]) -> Result<Self, HarnessError> {
        let writer = csv::Writer::from_path(path).map_err(|source| HarnessError::Csv {
            path: path.to_path_buf(),
            source,
        })?;
        let mut file = Self { path, writer };
        file.row(header)?;
        Ok(file)
    }

    pub(crate) fn row<T: AsRef<[u8]>>(&mut self, fields: &[T]) -> Result<(), HarnessError> {
        self.writer
            .write_record(fields)
            .map_err(|source| HarnessError::Csv {
                path: self.path.to_path_buf(),
                source,
            })
    }

    pub(crate) fn finish(mut self) -> Result<(), HarnessError> {
        self.writer.flush().map_err(|source| HarnessError::Io {
            path: self.path.to_path_buf(),
            source,
        })
    }
}

fn header(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn real_coordinates<S: ExportScalar>(x: &[S]) -> Option<Vec<f64>> {
    match S::coordinates(x) {
        Coordinates::Real(v) => Some(v),
        Coordinates::Complex(_) => None,
    }
}

/// One row per iteration. Real problems also get `x_0, x_1, …` columns.
pub fn write_trace<S: ExportScalar>(
    path: &Path,
    trace: &[IterationRecord<S>],
    num_params: usize,
) -> Result<(), HarnessError> {
    let with_x = S::FIELD == Field::Real;
    let mut cols = header(&[
        "k",
        "objective",
        "residual_norm",
        "grad_norm",
        "step_norm",
        "eta_dot_p",
        "beta",
        "branch",
        "alpha",
        "slope",
        "omega",
        "projected_residual_sqr",
        "eta_dot_step",
    ]);
    if with_x {
        cols.extend((0..num_params).map(|i| format!("x_{i}")));
    }
    let mut out = CsvFile::create(path, &cols)?;
    for rec in trace {
        let branch = match rec.branch {
            Branch::Deflated => "deflated",
            Branch::Undeflated => "undeflated",
        };
        let mut row = vec![
            rec.k.to_string(),
            num(rec.objective),
            num(rec.residual_norm),
            num(rec.grad_norm),
            num(rec.step_norm),
            num(rec.eta_dot_p),
            num(rec.beta),
            branch.to_string(),
            num(rec.alpha),
            num(rec.slope),
            opt(rec.bad_step.map(|b| b.omega)),
            opt(rec.bad_step.map(|b| b.projected_residual_sqr)),
            opt(rec.bad_step.map(|b| b.eta_dot_step)),
        ];
        if let Some(x) = real_coordinates(&rec.x).filter(|_| with_x) {
            row.extend(x.into_iter().map(num));
        }
        out.row(&row)?;
    }
    out.finish()
}

pub fn write_discoveries(path: &Path, rows: &[DiscoveryRow]) -> Result<(), HarnessError> {
    let mut out = CsvFile::create(
        path,
        &header(&[
            "discovery",
            "source",
            "iterations",
            "cumulative_residual_evals",
            "cumulative_jacobian_evals",
        ]),
    )?;
    for d in rows {
        out.row(&[
            d.discovery.to_string(),
            d.source.to_string(),
            d.iterations.to_string(),
            d.cumulative_residual_evals.to_string(),
            d.cumulative_jacobian_evals.to_string(),
        ])?;
    }
    out.finish()
}

/// Distinct solutions; coordinates are included for real problems.
pub fn write_solutions(path: &Path, solutions: &[SolutionSummary]) -> Result<(), HarnessError> {
    let dim = solutions
        .iter()
        .find_map(|s| match &s.x {
            Coordinates::Real(v) => Some(v.len()),
            Coordinates::Complex(_) => None,
        })
        .unwrap_or(0);
    let mut cols = header(&["index", "source", "objective", "residual_norm", "grad_norm"]);
    cols.extend((0..dim).map(|i| format!("x_{i}")));
    let mut out = CsvFile::create(path, &cols)?;
    for s in solutions {
        let mut row = vec![
            s.index.to_string(),
            s.source.to_string(),
            num(s.objective),
            num(s.residual_norm),
            num(s.grad_norm),
        ];
        if let Coordinates::Real(v) = &s.x {
            row.extend(v.iter().copied().map(num));
        }
        out.row(&row)?;
    }
    out.finish()
}

/// `u` on the collocation grid: `node, x, re_u, im_u`.
pub fn write_bvp_grid(path: &Path, problem: &BvpProblem, c: &[Complex64]) -> Result<(), HarnessError> {
    let mut out = CsvFile::create(path, &header(&["node", "x", "re_u", "im_u"]))?;
    let nodes = problem.grid().nodes();
    for (k, (u, x)) in problem.grid_values(c).iter().zip(nodes).enumerate() {
        out.row(&[k.to_string(), num(*x), num(u.re), num(u.im)])?;
    }
    out.finish()
}

pub fn write_starts(path: &Path, starts: &[StartRecord]) -> Result<(), HarnessError> {
    let dim = starts.first().map_or(0, |s| s.x.len());
    let mut cols = header(&[
        "start",
        "status",
        "iterations",
        "residual_evals",
        "jacobian_evals",
        "solution_index",
    ]);
    cols.extend((0..dim).map(|i| format!("start_{i}")));
    cols.extend((0..dim).map(|i| format!("x_{i}")));
    let mut out = CsvFile::create(path, &cols)?;
    for s in starts {
        let mut row = vec![
            s.start.to_string(),
            s.status.as_str().to_string(),
            s.iterations.to_string(),
            s.residual_evals.to_string(),
            s.jacobian_evals.to_string(),
            s.solution_index.map(|i| i.to_string()).unwrap_or_default(),
        ];
        row.extend(s.x0.iter().copied().map(num));
        row.extend(s.x.iter().copied().map(num));
        out.row(&row)?;
    }
    out.finish()
}
