//! Experiment driver for `qevo`: manifests, multi-run GA batches, CSV output
//! and comparison of evolved circuits against textbook solutions.

pub mod compare;
pub mod manifest;
pub mod runner;
pub mod svg;

use std::path::PathBuf;

use thiserror::Error;

pub use compare::{compare_to_reference, ComparisonReport};
pub use manifest::{ExperimentManifest, Overrides};
pub use runner::{run_manifest, ExperimentSummary};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid manifest: {0}")]
    Manifest(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Evolve(#[from] qevo::evolve::EvolveError),
    #[error(transparent)]
    Fitness(#[from] qevo::fitness::FitnessError),
    #[error(transparent)]
    Sim(#[from] qevo::sim::SimError),
    #[error("circuit does not solve every test case ({0} remaining)")]
    NotASolution(usize),
}

pub(crate) fn write_file(path: PathBuf, contents: impl AsRef<[u8]>) -> Result<(), ExperimentError> {
    std::fs::write(&path, contents).map_err(|source| ExperimentError::Io { path, source })
}
