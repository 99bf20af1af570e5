//! Experiment harness: configuration parsing, seeded trial batches over the
//! generators and algorithms, analytic-engine grids, the snapshot-predictor
//! pipeline, cross-check selftests, and CSV/JSON emission.

pub mod config;
pub mod experiment;
pub mod grid;
pub mod output;
pub mod selftest;
pub mod snapshot;

pub use config::{
    AnalysisConfig, AnalysisTask, ExperimentConfig, GeneratorSpec, OutputFormat, PredictorSpec,
    ProfileSpec, SnapshotConfig,
};
pub use experiment::{
    generate_graph, run_experiment, AlgorithmSummary, ExperimentSummary, TrialRecord,
};
pub use grid::{run_analysis, AnalysisRow};
pub use output::{write_analysis, write_experiment, write_snapshot};
pub use selftest::{run_selftest, SelftestCheck};
pub use snapshot::{snapshot_experiment, SnapshotRow};

use thiserror::Error;

use crate::algorithms::UnknownAlgorithm;
use crate::analysis::AnalysisError;
use crate::generators::{GeneratorError, ProfileError};
use crate::graph::GraphError;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    UnknownAlgorithm(#[from] UnknownAlgorithm),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(
        "trial {trial}, algorithm {algorithm}: size {size}, max matching {max}, hall bound \
         {hall} violate size <= max <= hall"
    )]
    InvariantViolation { trial: u64, algorithm: String, size: usize, max: usize, hall: usize },
    #[error("predictor unavailable: {0}")]
    PredictorUnavailable(String),
}

impl HarnessError {
    /// Wraps an I/O failure with the path it concerned.
    pub fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        HarnessError::Io { path: path.display().to_string(), source }
    }
}
