use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use qevo::fitness::FitnessKind;
use qevo::problems::{make_suite, ProblemKind};
use qevo::qasm::from_qasm;
use qevo_expcli::{compare_to_reference, run_manifest, ExperimentManifest, Overrides};

#[derive(Parser)]
#[command(name = "qevo", version, about = "Evolve quantum circuits with a genetic algorithm")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the GA runs described by a manifest and/or flags.
    Run(RunArgs),
    /// Run all three fitness functions, each into its own subdirectory.
    Grid(RunArgs),
    /// Compare a circuit in OpenQASM with the textbook solution.
    Compare {
        /// OpenQASM file written by `run`.
        qasm: PathBuf,
        #[arg(long, value_parser = parse_problem)]
        problem: ProblemKind,
        #[arg(long, default_value_t = 3)]
        bits: usize,
    },
}

#[derive(Args)]
struct RunArgs {
    /// JSON manifest; flags below override its fields.
    #[arg(long)]
    manifest: Option<PathBuf>,
    #[arg(long, value_parser = parse_problem)]
    problem: Option<ProblemKind>,
    #[arg(long, value_parser = parse_fitness)]
    fitness: Option<FitnessKind>,
    #[arg(long)]
    bits: Option<usize>,
    #[arg(long)]
    runs: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    generations: Option<usize>,
    #[arg(long)]
    population: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write fitness.svg.
    #[arg(long)]
    svg: bool,
}

fn parse_problem(s: &str) -> Result<ProblemKind, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string()))
        .map_err(|_| format!("unknown problem `{s}` (expected bv or search)"))
}

fn parse_fitness(s: &str) -> Result<FitnessKind, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string()))
        .map_err(|_| format!("unknown fitness `{s}` (expected baseline, direct or indirect)"))
}

impl RunArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            problem: self.problem,
            fitness: self.fitness,
            runs: self.runs,
            seed: self.seed,
            generations: self.generations,
            population: self.population,
            num_input_bits: self.bits,
            output_dir: self.out.clone(),
            svg: self.svg,
        }
    }

    fn manifest(&self, overrides: &Overrides) -> Result<ExperimentManifest> {
        Ok(match &self.manifest {
            Some(path) => ExperimentManifest::load(path, overrides)?,
            None => ExperimentManifest::from_overrides(overrides)?,
        })
    }
}

fn run(manifest: &ExperimentManifest) -> Result<()> {
    let summary = run_manifest(manifest)
        .with_context(|| format!("running into {}", manifest.output_dir.display()))?;
    println!(
        "{} {}: {}/{} runs solved, best fitness {:.6e} (run {}), results in {}",
        manifest.fitness.name(),
        manifest.problem.name(),
        summary.solved_runs,
        summary.runs.len(),
        summary.best_fitness,
        summary.best_run,
        manifest.output_dir.display()
    );
    Ok(())
}

fn main_inner() -> Result<()> {
    match Cli::parse().command {
        Command::Run(args) => run(&args.manifest(&args.overrides())?),
        Command::Grid(args) => {
            if args.fitness.is_some() {
                bail!("grid runs every fitness function; drop --fitness");
            }
            // Resolve and validate all three before starting any.
            let mut manifests = Vec::new();
            for fitness in FitnessKind::ALL {
                let mut o = args.overrides();
                o.fitness = Some(fitness);
                let mut m = args.manifest(&o)?;
                m.output_dir = m.output_dir.join(fitness.name());
                manifests.push(m);
            }
            manifests.iter().try_for_each(run)
        }
        Command::Compare { qasm, problem, bits } => {
            let text = std::fs::read_to_string(&qasm).with_context(|| format!("reading {}", qasm.display()))?;
            let circuit = from_qasm(&text).with_context(|| format!("parsing {}", qasm.display()))?;
            let suite = make_suite(problem, bits)?;
            if circuit.num_qubits != suite.num_qubits {
                bail!("circuit has {} qubits, problem needs {}", circuit.num_qubits, suite.num_qubits);
            }
            print!("{}", compare_to_reference(&circuit.chromosome, &suite)?.render());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match main_inner() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
