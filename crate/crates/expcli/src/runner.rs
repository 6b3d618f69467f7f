//! Executes a manifest: independent GA runs in parallel, then per-run and
//! aggregate CSVs plus the best circuit found.
//!
//! Files written to the output directory:
//!
//! | file | contents |
//! |---|---|
//! | `manifest.json` | resolved manifest |
//! | `suite.json` | test cases of the problem |
//! | `run_XX.csv` | `generation,min_fitness,mean_fitness` for run `XX` |
//! | `aggregate.csv` | `generation,avg_min_fitness,avg_mean_fitness` |
//! | `summary.json` | final fitness of every run and the best run |
//! | `best.qasm`, `best.txt` | best circuit as OpenQASM and as a gene listing |
//! | `best_report.json` | fitness breakdown of the best circuit |
//! | `comparison.txt` | only when the best circuit solves every case |
//! | `fitness.svg` | only when `svg` is set |

use std::path::Path;

use qevo::evolve::{run_experiment, GenerationStats};
use qevo::fitness::FitnessReport;
use qevo::gates::Chromosome;
use qevo::problems::make_suite;
use qevo::qasm::to_qasm;
use rayon::prelude::*;
use serde::Serialize;

use crate::compare::compare_to_reference;
use crate::manifest::ExperimentManifest;
use crate::{svg, write_file, ExperimentError};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub run: usize,
    pub seed: u64,
    pub final_min_fitness: f64,
    pub solved: bool,
    /// First generation whose best individual solved every test case.
    pub first_solved_generation: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentSummary {
    pub runs: Vec<RunSummary>,
    pub solved_runs: usize,
    pub best_run: usize,
    pub best_fitness: f64,
    pub best_chromosome: Chromosome,
    pub best_report: FitnessReport,
}

#[derive(Serialize)]
struct RunRow {
    generation: usize,
    min_fitness: f64,
    mean_fitness: f64,
}

#[derive(Serialize)]
struct AggregateRow {
    generation: usize,
    avg_min_fitness: f64,
    avg_mean_fitness: f64,
}

/// Validates `manifest`, runs every GA run and writes the results.
pub fn run_manifest(manifest: &ExperimentManifest) -> Result<ExperimentSummary, ExperimentError> {
    manifest.validate()?;
    let suite = make_suite(manifest.problem, manifest.num_input_bits)
        .map_err(|e| ExperimentError::Manifest(e.to_string()))?;
    let dir = manifest.output_dir.as_path();
    std::fs::create_dir_all(dir).map_err(|source| ExperimentError::Io { path: dir.to_path_buf(), source })?;
    // Written first so an unwritable directory fails before any run.
    write_file(dir.join("manifest.json"), serde_json::to_string_pretty(manifest)?)?;
    write_file(dir.join("suite.json"), serde_json::to_string_pretty(&suite.describe())?)?;

    let histories: Vec<Vec<GenerationStats>> = (0..manifest.runs)
        .into_par_iter()
        .map(|run| {
            let mut config = manifest.ga.clone();
            config.seed = manifest.run_seed(run);
            run_experiment(&config, &suite, manifest.fitness)
        })
        .collect::<Result<_, _>>()?;

    for (run, history) in histories.iter().enumerate() {
        write_run_csv(&dir.join(format!("run_{run:02}.csv")), history)?;
    }
    write_aggregate_csv(&dir.join("aggregate.csv"), &histories)?;

    let runs: Vec<RunSummary> = histories
        .iter()
        .enumerate()
        .map(|(run, history)| {
            let last = history.last().expect("at least one generation");
            RunSummary {
                run,
                seed: manifest.run_seed(run),
                final_min_fitness: last.min_fitness,
                solved: last.best_report.all_passed(),
                first_solved_generation: history.iter().find(|s| s.best_report.all_passed()).map(|s| s.generation),
            }
        })
        .collect();
    let best_run = runs
        .iter()
        .min_by(|a, b| a.final_min_fitness.total_cmp(&b.final_min_fitness).then(a.run.cmp(&b.run)))
        .map(|r| r.run)
        .expect("at least one run");
    let best = histories[best_run].last().expect("at least one generation");
    let summary = ExperimentSummary {
        solved_runs: runs.iter().filter(|r| r.solved).count(),
        best_run,
        best_fitness: best.min_fitness,
        best_chromosome: best.best_chromosome.clone(),
        best_report: best.best_report,
        runs,
    };

    write_file(dir.join("summary.json"), serde_json::to_string_pretty(&summary)?)?;
    write_file(dir.join("best.qasm"), to_qasm(&best.best_chromosome, suite.num_qubits))?;
    write_file(dir.join("best.txt"), best.best_chromosome.diagram())?;
    write_file(dir.join("best_report.json"), serde_json::to_string_pretty(&best.best_report)?)?;
    if best.best_report.all_passed() {
        let comparison = compare_to_reference(&best.best_chromosome, &suite)?;
        write_file(dir.join("comparison.txt"), comparison.render())?;
    }
    if manifest.svg {
        let (min, mean) = aggregate(&histories);
        let title = format!("{:?} / {}", manifest.problem, manifest.fitness.name());
        write_file(dir.join("fitness.svg"), svg::line_chart(&title, &[("avg min", &min), ("avg mean", &mean)]))?;
    }
    Ok(summary)
}

fn write_run_csv(path: &Path, history: &[GenerationStats]) -> Result<(), ExperimentError> {
    let mut w = csv::Writer::from_path(path)?;
    for s in history {
        w.serialize(RunRow { generation: s.generation, min_fitness: s.min_fitness, mean_fitness: s.mean_fitness })?;
    }
    w.flush().map_err(|source| ExperimentError::Io { path: path.to_path_buf(), source })
}

/// Per-generation averages of the min and mean fitness across runs.
fn aggregate(histories: &[Vec<GenerationStats>]) -> (Vec<f64>, Vec<f64>) {
    let generations = histories.iter().map(Vec::len).min().unwrap_or(0);
    let runs = histories.len() as f64;
    (0..generations)
        .map(|g| {
            let min: f64 = histories.iter().map(|h| h[g].min_fitness).sum();
            let mean: f64 = histories.iter().map(|h| h[g].mean_fitness).sum();
            (min / runs, mean / runs)
        })
        .unzip()
}

fn write_aggregate_csv(path: &Path, histories: &[Vec<GenerationStats>]) -> Result<(), ExperimentError> {
    let (min, mean) = aggregate(histories);
    let mut w = csv::Writer::from_path(path)?;
    for (generation, (avg_min_fitness, avg_mean_fitness)) in min.into_iter().zip(mean).enumerate() {
        w.serialize(AggregateRow { generation, avg_min_fitness, avg_mean_fitness })?;
    }
    w.flush().map_err(|source| ExperimentError::Io { path: path.to_path_buf(), source })
}
