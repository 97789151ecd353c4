//! Reproducible experiment harness.
//!
//! Five experiment kinds mirror the crate's study surface: scaling sweeps
//! over n (fixed k or k proportional to n), lazy speedup profiles across
//! topologies, epsilon sweeps of the stochastic optimizer, Monte Carlo
//! deviation distributions, and block-model studies of the distributed
//! optimizer. Every run is driven by an [`ExperimentConfig`] (TOML), executes
//! deterministically from its seeds, and lands in an [`ExperimentReport`]
//! with per-cell traces, aggregate tables, and log-log scaling fits.
//!
//! Automated assertions elsewhere in the crate target call counts and
//! deviation statistics, which are machine-independent; wall-clock speedups
//! are recorded in reports as information.

use thiserror::Error;

use crate::graph::GraphError;
use crate::greedy::GreedyError;

mod config;
mod fit;
mod report;
mod run;

pub use config::{
    AlgorithmSpec, DistributedConfig, ExperimentConfig, ExperimentKind, GeneratorParams,
    OutputConfig, PartitionMode, ReportFormat, SbmConfig, SeedRange, Topology,
};
pub use fit::{deviation_stats, fit_scaling_exponent, summarize, DeviationSummary, ScalingFit};
pub use report::{
    emit_report, fmt_sig12, round_sig12, AggregateRow, CellOutcome, CellResult, ExperimentReport,
    FitRow, Prediction,
};
pub use run::run_experiment;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error("scaling fit needs at least 3 points, got {got}")]
    NotEnoughPoints { got: usize },
    #[error("scaling fit points must be strictly positive")]
    NonPositivePoint,
    #[error("scaling fit x values are all equal")]
    DegenerateFit,
    #[error("empty sample")]
    EmptySample,
    #[error("iteration {at_k} beyond trace with {k} iterations")]
    IterationOutOfRange { at_k: usize, k: usize },
    #[error("baseline instance '{baseline}' does not match candidate '{candidate}'")]
    MismatchedInstances { baseline: String, candidate: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Greedy(#[from] GreedyError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("config parse error: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, BenchError>;
