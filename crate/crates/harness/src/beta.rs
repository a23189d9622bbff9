//! β-field export for two-parameter problems.

use std::path::{Path, PathBuf};

use deflsq_core::prelude::*;
use deflsq_core::deflation::BetaField;

use crate::config::ExperimentConfig;
use crate::error::HarnessError;
use crate::output::{num, CsvFile};
use crate::registry::ProblemInstance;
use crate::run::execute;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RegionCounts {
    pub green: usize,
    pub yellow: usize,
    pub red: usize,
    pub undefined: usize,
}

pub struct BetaFieldOutput {
    pub field: BetaField,
    pub epsilon: f64,
    pub deflated: Vec<Vec<f64>>,
    pub counts: RegionCounts,
    /// Connected (4-neighbour) components of red nodes.
    pub red_components: usize,
    pub csv_path: PathBuf,
}

/// Computes β on the configured grid with the configured deflated points and
/// writes `beta_field.csv` (`ix, iy, x, y, beta, region`) and
/// `deflated_points.csv`.
pub fn emit_beta_field(config: &ExperimentConfig, root: &Path) -> Result<BetaFieldOutput, HarnessError> {
    config.validate()?;
    let instance = ProblemInstance::build(config)?;
    let problem: &dyn Problem<Scalar = f64> = match &instance {
        ProblemInstance::Himmelblau(p) => p,
        ProblemInstance::FTrig(p) => p,
        _ => {
            return Err(HarnessError::Config(format!(
                "beta-field needs a real 2-parameter problem; {} is not",
                config.problem
            )))
        }
    };

    let mut deflated = match &config.beta_points {
        Some(points) => points.clone(),
        None => execute(config)?
            .real_solutions()
            .expect("real problems yield real solutions"),
    };
    if let Some(k) = config.beta_deflations {
        deflated.truncate(k);
    }
    let mut state = DeflationState::for_problem(problem, config.deflation_config());
    for y in &deflated {
        if y.len() != 2 {
            return Err(HarnessError::Config(format!(
                "deflated point {y:?} does not have 2 coordinates"
            )));
        }
        state
            .push(y.clone())
            .map_err(|e| HarnessError::Config(e.to_string()))?;
    }

    let bounds = problem.bounds().unwrap_or_else(|| vec![(-1.0, 1.0); 2]);
    let range = |r: Option<[f64; 2]>, i: usize| r.map_or(bounds[i], |[lo, hi]| (lo, hi));
    let grid = Grid2d {
        x_range: range(config.x_range, 0),
        y_range: range(config.y_range, 1),
        nx: config.grid_nx,
        ny: config.grid_ny,
    };
    let field = beta_field(problem, &state, &grid);
    let regions = field.regions(config.epsilon);

    let mut counts = RegionCounts::default();
    for r in &regions {
        match r {
            Some(Region::Green) => counts.green += 1,
            Some(Region::Yellow) => counts.yellow += 1,
            Some(Region::Red) => counts.red += 1,
            None => counts.undefined += 1,
        }
    }
    let red_components = count_components(&grid, |i| regions[i] == Some(Region::Red));

    let dir = config.resolved_output_dir(root);
    std::fs::create_dir_all(&dir).map_err(|source| HarnessError::Io {
        path: dir.clone(),
        source,
    })?;
    let csv_path = dir.join("beta_field.csv");
    let header: Vec<String> = ["ix", "iy", "x", "y", "beta", "region"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let mut out = CsvFile::create(&csv_path, &header)?;
    for (i, (beta, region)) in field.values.iter().zip(&regions).enumerate() {
        let [x, y] = grid.node(i);
        let region = match region {
            Some(Region::Green) => "green",
            Some(Region::Yellow) => "yellow",
            Some(Region::Red) => "red",
            None => "undefined",
        };
        out.row(&[
            (i % grid.nx).to_string(),
            (i / grid.nx).to_string(),
            num(x),
            num(y),
            beta.map(num).unwrap_or_default(),
            region.to_string(),
        ])?;
    }
    out.finish()?;

    let points_path = dir.join("deflated_points.csv");
    let mut out = CsvFile::create(&points_path, &["index".into(), "x_0".into(), "x_1".into()])?;
    for (i, y) in deflated.iter().enumerate() {
        out.row(&[i.to_string(), num(y[0]), num(y[1])])?;
    }
    out.finish()?;

    Ok(BetaFieldOutput {
        field,
        epsilon: config.epsilon,
        deflated,
        counts,
        red_components,
        csv_path,
    })
}

/// Number of 4-connected components of grid nodes where `member` holds.
pub fn count_components(grid: &Grid2d, member: impl Fn(usize) -> bool) -> usize {
    let (nx, ny) = (grid.nx, grid.ny);
    let mut seen = vec![false; nx * ny];
    let mut components = 0;
    let mut stack = Vec::new();
    for start in 0..nx * ny {
        if seen[start] || !member(start) {
            continue;
        }
        components += 1;
        seen[start] = true;
        stack.push(start);
        while let Some(i) = stack.pop() {
            let (ix, iy) = (i % nx, i / nx);
            let neighbours = [
                (ix > 0).then(|| i - 1),
                (ix + 1 < nx).then(|| i + 1),
                (iy > 0).then(|| i - nx),
                (iy + 1 < ny).then(|| i + nx),
            ];
            for j in neighbours.into_iter().flatten() {
                if !seen[j] && member(j) {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
    }
    components
}
