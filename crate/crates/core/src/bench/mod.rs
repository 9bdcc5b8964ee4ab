//! Instance generators, corruptors and the experiment runner.

mod corrupt;
mod experiment;
mod generate;

pub use corrupt::{corrupt, Certificate, Corruption};
pub use experiment::{
    format_float, run_experiment, run_experiment_file, ExperimentConfig, ExperimentResult, Grid, Mode, Summary, Target,
    TrialRecord, CSV_HEADER,
};
pub use generate::{generate, skeleton_size, GraphKind};

use thiserror::Error;

use crate::error::{CheckError, ConfigError, GraphError, ReconError};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("generation failed: {0}")]
    Generation(String),
    #[error("corruption failed: {0}")]
    Corruption(String),
    #[error("certificate rejected: {0}")]
    Certificate(String),
    #[error("bad experiment config: {0}")]
    Experiment(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Recon(#[from] ReconError),
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error("{path}: {source}")]
    Io {
        path: std::path::PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl From<crate::error::QueryError> for BenchError {
    fn from(e: crate::error::QueryError) -> Self {
        BenchError::Recon(e.into())
    }
}

impl BenchError {
    /// Whether the failure is a bad parameter rather than a failed check or I/O.
    pub fn is_parameter_error(&self) -> bool {
        matches!(self, BenchError::Config(_) | BenchError::Experiment(_) | BenchError::Recon(ReconError::Config(_)))
    }

    pub fn is_io_error(&self) -> bool {
        matches!(self, BenchError::Io { .. } | BenchError::Graph(GraphError::Io { .. }))
    }
}
