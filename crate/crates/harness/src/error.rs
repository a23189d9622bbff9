use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Problem(#[from] deflsq_core::problem::ProblemError),
    #[error(transparent)]
    Solver(#[from] deflsq_core::solvers::SolverError),
    #[error(transparent)]
    Multistart(#[from] deflsq_core::multistart::MultistartError),
}
