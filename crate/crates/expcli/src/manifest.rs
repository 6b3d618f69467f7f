//! Experiment manifests: one JSON file describing a batch of GA runs.
//!
//! ```json
//! {
//!   "problem": "bv",
//!   "num_input_bits": 3,
//!   "fitness": "indirect",
//!   "runs": 12,
//!   "ga": { "population_size": 1000, "seed": 0 },
//!   "output_dir": "out/bv-indirect"
//! }
//! ```
//!
//! Keys missing from `ga` take the problem's defaults (chromosome length 15
//! and 500 generations for Bernstein-Vazirani, 30 and 800 for search).

use std::path::{Path, PathBuf};

use qevo::evolve::GAConfig;
use qevo::fitness::FitnessKind;
use qevo::problems::ProblemKind;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::ExperimentError;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentManifest {
    pub problem: ProblemKind,
    pub num_input_bits: usize,
    pub fitness: FitnessKind,
    pub runs: usize,
    pub ga: GAConfig,
    pub output_dir: PathBuf,
    /// Also render the aggregate curves as SVG.
    pub svg: bool,
}

/// On-disk form, with every field optional except the problem.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ManifestFile {
    problem: Option<ProblemKind>,
    num_input_bits: Option<usize>,
    fitness: Option<FitnessKind>,
    runs: Option<usize>,
    #[serde(default)]
    ga: Map<String, Value>,
    output_dir: Option<PathBuf>,
    #[serde(default)]
    svg: bool,
}

/// Flag overrides applied on top of a manifest file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub problem: Option<ProblemKind>,
    pub fitness: Option<FitnessKind>,
    pub runs: Option<usize>,
    pub seed: Option<u64>,
    pub generations: Option<usize>,
    pub population: Option<usize>,
    pub num_input_bits: Option<usize>,
    pub output_dir: Option<PathBuf>,
    pub svg: bool,
}

pub fn default_ga(problem: ProblemKind) -> GAConfig {
    match problem {
        ProblemKind::BernsteinVazirani => GAConfig::bernstein_vazirani(),
        ProblemKind::Search => GAConfig::search(),
    }
}

impl ExperimentManifest {
    /// Default experiment for a problem: 3 bits, 12 runs.
    pub fn defaults(problem: ProblemKind, fitness: FitnessKind, output_dir: impl Into<PathBuf>) -> Self {
        ExperimentManifest {
            problem,
            num_input_bits: 3,
            fitness,
            runs: 12,
            ga: default_ga(problem),
            output_dir: output_dir.into(),
            svg: false,
        }
    }

    pub fn from_json(text: &str, overrides: &Overrides) -> Result<Self, ExperimentError> {
        let file: ManifestFile =
            serde_json::from_str(text).map_err(|e| ExperimentError::Manifest(e.to_string()))?;
        resolve(file, overrides)
    }

    pub fn load(path: &Path, overrides: &Overrides) -> Result<Self, ExperimentError> {
        let text = std::fs::read_to_string(path).map_err(|source| ExperimentError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text, overrides)
    }

    /// Builds a manifest from flags alone.
    pub fn from_overrides(overrides: &Overrides) -> Result<Self, ExperimentError> {
        resolve(ManifestFile::default(), overrides)
    }

    /// Seed of run `index`: the manifest seed plus the index.
    pub fn run_seed(&self, index: usize) -> u64 {
        self.ga.seed.wrapping_add(index as u64)
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.runs == 0 {
            return Err(ExperimentError::Manifest("runs must be at least 1".into()));
        }
        self.ga.validate().map_err(|e| ExperimentError::Manifest(e.to_string()))?;
        qevo::problems::make_suite(self.problem, self.num_input_bits)
            .map_err(|e| ExperimentError::Manifest(e.to_string()))?;
        Ok(())
    }
}

fn resolve(file: ManifestFile, o: &Overrides) -> Result<ExperimentManifest, ExperimentError> {
    let problem = o
        .problem
        .or(file.problem)
        .ok_or_else(|| ExperimentError::Manifest("no problem given".into()))?;
    let mut ga = serde_json::to_value(default_ga(problem)).expect("GAConfig serializes");
    if let Value::Object(base) = &mut ga {
        base.extend(file.ga);
    }
    let mut ga: GAConfig =
        serde_json::from_value(ga).map_err(|e| ExperimentError::Manifest(format!("ga: {e}")))?;
    if let Some(seed) = o.seed {
        ga.seed = seed;
    }
    if let Some(generations) = o.generations {
        ga.generations = generations;
    }
    if let Some(population) = o.population {
        ga.population_size = population;
    }
    let manifest = ExperimentManifest {
        problem,
        num_input_bits: o.num_input_bits.or(file.num_input_bits).unwrap_or(3),
        fitness: o.fitness.or(file.fitness).unwrap_or(FitnessKind::Indirect),
        runs: o.runs.or(file.runs).unwrap_or(12),
        ga,
        output_dir: o
            .output_dir
            .clone()
            .or(file.output_dir)
            .ok_or_else(|| ExperimentError::Manifest("no output directory given".into()))?,
        svg: o.svg || file.svg,
    };
    manifest.validate()?;
    Ok(manifest)
}
