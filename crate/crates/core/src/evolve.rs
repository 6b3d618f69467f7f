//! The genetic algorithm.
//!
//! Each generation is evaluated (in parallel), optionally has the angles of
//! its best individuals refined with a Nelder-Mead search, and is then
//! replaced by its elite plus offspring bred by tournament selection,
//! single-point crossover and per-gene mutation. All random choices come from
//! one sequential stream, so a run is fully determined by its seed no matter
//! how evaluation is scheduled.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fitness::{FitnessError, FitnessKind, FitnessReport};
use crate::gates::{random_chromosome, random_gate, Chromosome, GateError, GateSet};
use crate::problems::ProblemSuite;
use crate::simplex::nelder_mead;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvolveError {
    #[error("invalid GA configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Gate(#[from] GateError),
    #[error(transparent)]
    Fitness(#[from] FitnessError),
}

/// Angle refinement applied to the best individuals of every generation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ParamOpt {
    #[default]
    Off,
    TopK { top_k: usize, max_iters: usize },
}

/// How a mutated gene changes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MutationMode {
    /// Replace the gene with a freshly drawn random gate.
    #[default]
    Replace,
    /// Exchange the gene with another position of the same chromosome.
    Swap,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GAConfig {
    pub population_size: usize,
    pub crossover_prob: f64,
    pub gate_swap_prob: f64,
    pub elitism_fraction: f64,
    pub chromosome_length: usize,
    pub generations: usize,
    pub tournament_size: usize,
    pub seed: u64,
    pub param_opt: ParamOpt,
    pub mutation: MutationMode,
    pub gate_set: GateSet,
}

impl Default for GAConfig {
    fn default() -> Self {
        GAConfig {
            population_size: 1000,
            crossover_prob: 0.4,
            gate_swap_prob: 0.03,
            elitism_fraction: 0.10,
            chromosome_length: 15,
            generations: 500,
            tournament_size: 2,
            seed: 0,
            param_opt: ParamOpt::Off,
            mutation: MutationMode::Replace,
            gate_set: GateSet::experiment_default(),
        }
    }
}

impl GAConfig {
    /// Bernstein-Vazirani run: chromosome length 15, 500 generations.
    pub fn bernstein_vazirani() -> Self {
        GAConfig { chromosome_length: 15, generations: 500, ..GAConfig::default() }
    }

    /// Unstructured search run: chromosome length 30, 800 generations.
    pub fn search() -> Self {
        GAConfig { chromosome_length: 30, generations: 800, ..GAConfig::default() }
    }

    /// `floor(elitism_fraction * population_size)`, tolerant of the float
    /// product landing just below an integer.
    pub fn elite_count(&self) -> usize {
        (self.elitism_fraction * self.population_size as f64 + 1e-9).floor() as usize
    }

    pub fn validate(&self) -> Result<(), EvolveError> {
        let bad = |msg: String| Err(EvolveError::InvalidConfig(msg));
        if self.population_size == 0 {
            return bad("population_size must be positive".into());
        }
        if self.chromosome_length == 0 {
            return bad("chromosome_length must be positive".into());
        }
        if self.tournament_size == 0 {
            return bad("tournament_size must be positive".into());
        }
        for (name, p) in [
            ("crossover_prob", self.crossover_prob),
            ("gate_swap_prob", self.gate_swap_prob),
            ("elitism_fraction", self.elitism_fraction),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("{name} = {p} outside [0, 1]"));
            }
        }
        if self.elite_count() < 1 {
            return bad(format!(
                "elitism_fraction {} keeps no individual of {}",
                self.elitism_fraction, self.population_size
            ));
        }
        if let ParamOpt::TopK { top_k, .. } = self.param_opt {
            if top_k == 0 {
                return bad("param_opt top_k must be positive".into());
            }
        }
        Ok(())
    }
}

/// A chromosome with its fitness report, if already evaluated.
#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub chromosome: Chromosome,
    pub report: Option<FitnessReport>,
}

impl Individual {
    pub fn new(chromosome: Chromosome) -> Self {
        Individual { chromosome, report: None }
    }

    /// Fitness of an evaluated individual; `+inf` if not yet evaluated.
    pub fn fitness(&self) -> f64 {
        self.report.map_or(f64::INFINITY, |r| r.fitness)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    pub individuals: Vec<Individual>,
}

impl Population {
    pub fn len(&self) -> usize {
        self.individuals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.individuals.is_empty()
    }

    pub fn chromosomes(&self) -> impl Iterator<Item = &Chromosome> {
        self.individuals.iter().map(|i| &i.chromosome)
    }

    /// Evaluates every individual without a cached report.
    pub fn evaluate(&mut self, suite: &ProblemSuite, fitness: FitnessKind) -> Result<(), EvolveError> {
        self.individuals
            .par_iter_mut()
            .filter(|ind| ind.report.is_none())
            .try_for_each(|ind| {
                ind.report = Some(fitness.evaluate(&ind.chromosome, suite)?);
                Ok(())
            })
    }

    /// Indices sorted by fitness, ties broken by lower index.
    fn ranking(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.individuals.len()).collect();
        order.sort_by(|&a, &b| self.individuals[a].fitness().total_cmp(&self.individuals[b].fitness()));
        order
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenerationStats {
    pub generation: usize,
    pub min_fitness: f64,
    pub mean_fitness: f64,
    pub best_chromosome: Chromosome,
    pub best_report: FitnessReport,
}

pub fn init_population<R: Rng + ?Sized>(
    config: &GAConfig,
    num_qubits: usize,
    rng: &mut R,
) -> Result<Population, EvolveError> {
    config.validate()?;
    let individuals = (0..config.population_size)
        .map(|_| {
            random_chromosome(config.chromosome_length, num_qubits, &config.gate_set, rng).map(Individual::new)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Population { individuals })
}

/// Advances one generation. The returned stats describe `pop` after
/// evaluation and refinement; the returned population is its successor.
pub fn step_generation<R: Rng + ?Sized>(
    mut pop: Population,
    generation: usize,
    suite: &ProblemSuite,
    fitness: FitnessKind,
    config: &GAConfig,
    rng: &mut R,
) -> Result<(Population, GenerationStats), EvolveError> {
    if pop.len() != config.population_size {
        return Err(EvolveError::InvalidConfig(format!(
            "population has {} individuals, config expects {}",
            pop.len(),
            config.population_size
        )));
    }
    pop.evaluate(suite, fitness)?;

    if let ParamOpt::TopK { top_k, max_iters } = config.param_opt {
        let chosen: Vec<usize> = pop.ranking().into_iter().take(top_k).collect();
        let refined: Vec<(usize, Individual)> = chosen
            .par_iter()
            .map(|&i| refine_angles(&pop.individuals[i], suite, fitness, max_iters).map(|r| (i, r)))
            .collect::<Result<_, _>>()?;
        for (i, ind) in refined {
            pop.individuals[i] = ind;
        }
    }

    let order = pop.ranking();
    let best = &pop.individuals[order[0]];
    let mean = pop.individuals.iter().map(Individual::fitness).sum::<f64>() / pop.len() as f64;
    let stats = GenerationStats {
        generation,
        min_fitness: best.fitness(),
        mean_fitness: mean,
        best_chromosome: best.chromosome.clone(),
        best_report: best.report.expect("evaluated above"),
    };

    let size = config.population_size;
    let mut next: Vec<Individual> = Vec::with_capacity(size);
    next.extend(order.iter().take(config.elite_count().min(size)).map(|&i| pop.individuals[i].clone()));

    let num_qubits = suite.num_qubits;
    while next.len() < size {
        let a = tournament(&pop, config.tournament_size, rng);
        let b = tournament(&pop, config.tournament_size, rng);
        let mut children = [pop.individuals[a].clone(), pop.individuals[b].clone()];
        let len = config.chromosome_length;
        if rng.random::<f64>() < config.crossover_prob && len >= 2 {
            let cut = rng.random_range(1..len);
            let (left, right) = children.split_at_mut(1);
            let (x, y) = (left[0].chromosome.genes_mut(), right[0].chromosome.genes_mut());
            // Swapping identical tails leaves the cached reports valid.
            if x[cut..] != y[cut..] {
                x[cut..].swap_with_slice(&mut y[cut..]);
                left[0].report = None;
                right[0].report = None;
            }
        }
        for child in &mut children {
            if mutate(&mut child.chromosome, config, num_qubits, rng)? {
                child.report = None;
            }
        }
        for child in children {
            if next.len() < size {
                next.push(child);
            }
        }
    }
    Ok((Population { individuals: next }, stats))
}

/// Runs `config.generations` generations from a population seeded with
/// `config.seed`.
pub fn run_experiment(
    config: &GAConfig,
    suite: &ProblemSuite,
    fitness: FitnessKind,
) -> Result<Vec<GenerationStats>, EvolveError> {
    run_experiment_with(config, suite, fitness, |_| {})
}

/// Like [`run_experiment`], calling `on_generation` after every generation.
pub fn run_experiment_with<F>(
    config: &GAConfig,
    suite: &ProblemSuite,
    fitness: FitnessKind,
    mut on_generation: F,
) -> Result<Vec<GenerationStats>, EvolveError>
where
    F: FnMut(&GenerationStats),
{
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut pop = init_population(config, suite.num_qubits, &mut rng)?;
    let mut history = Vec::with_capacity(config.generations);
    for generation in 0..config.generations {
        let (next, stats) = step_generation(pop, generation, suite, fitness, config, &mut rng)?;
        on_generation(&stats);
        history.push(stats);
        pop = next;
    }
    Ok(history)
}

fn tournament<R: Rng + ?Sized>(pop: &Population, size: usize, rng: &mut R) -> usize {
    let mut winner = rng.random_range(0..pop.len());
    for _ in 1..size {
        let challenger = rng.random_range(0..pop.len());
        let (w, c) = (pop.individuals[winner].fitness(), pop.individuals[challenger].fitness());
        if c < w || (c == w && challenger < winner) {
            winner = challenger;
        }
    }
    winner
}

/// Per-gene mutation. Returns whether anything changed.
fn mutate<R: Rng + ?Sized>(
    chromosome: &mut Chromosome,
    config: &GAConfig,
    num_qubits: usize,
    rng: &mut R,
) -> Result<bool, EvolveError> {
    let len = chromosome.len();
    let mut changed = false;
    for i in 0..len {
        if rng.random::<f64>() >= config.gate_swap_prob {
            continue;
        }
        match config.mutation {
            MutationMode::Replace => {
                let gene = random_gate(num_qubits, &config.gate_set, rng)?;
                changed |= chromosome.genes()[i] != gene;
                chromosome.genes_mut()[i] = gene;
            }
            MutationMode::Swap if len >= 2 => {
                let mut j = rng.random_range(0..len - 1);
                if j >= i {
                    j += 1;
                }
                changed |= chromosome.genes()[i] != chromosome.genes()[j];
                chromosome.genes_mut().swap(i, j);
            }
            MutationMode::Swap => {}
        }
    }
    Ok(changed)
}

/// Maps an angle onto [-pi, pi].
fn wrap_angle(angle: f64) -> f64 {
    let wrapped = angle - 2.0 * PI * (angle / (2.0 * PI)).round();
    wrapped.clamp(-PI, PI)
}

/// Nelder-Mead over the angles of one individual. The result is only kept if
/// it strictly lowers the fitness; otherwise the input is returned unchanged.
pub fn refine_angles(
    individual: &Individual,
    suite: &ProblemSuite,
    fitness: FitnessKind,
    max_iters: usize,
) -> Result<Individual, EvolveError> {
    let positions = individual.chromosome.angle_positions();
    let current = match individual.report {
        Some(r) => r,
        None => fitness.evaluate(&individual.chromosome, suite)?,
    };
    if positions.is_empty() || max_iters == 0 {
        return Ok(Individual { chromosome: individual.chromosome.clone(), report: Some(current) });
    }
    let with_angles = |angles: &[f64]| {
        let mut c = individual.chromosome.clone();
        for (&pos, &a) in positions.iter().zip(angles) {
            c.genes_mut()[pos].angle = Some(wrap_angle(a));
        }
        c
    };
    let start: Vec<f64> = positions
        .iter()
        .map(|&p| individual.chromosome.genes()[p].angle.unwrap_or(0.0))
        .collect();
    let found = nelder_mead(&start, 0.25, max_iters, |angles| {
        fitness.evaluate(&with_angles(angles), suite).map_or(f64::INFINITY, |r| r.fitness)
    });
    if found.cost < current.fitness {
        let chromosome = with_angles(&found.point);
        let report = fitness.evaluate(&chromosome, suite)?;
        if report.fitness < current.fitness {
            return Ok(Individual { chromosome, report: Some(report) });
        }
    }
    Ok(Individual { chromosome: individual.chromosome.clone(), report: Some(current) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{GateKind, GateSpec};
    use crate::problems::{make_bv_suite, make_search_suite};

    fn small_config() -> GAConfig {
        GAConfig { population_size: 40, generations: 15, seed: 3, ..GAConfig::bernstein_vazirani() }
    }

    #[test]
    fn defaults_match_experiment_protocol() {
        let c = GAConfig::default();
        assert_eq!(c.population_size, 1000);
        assert_eq!(c.crossover_prob, 0.4);
        assert_eq!(c.gate_swap_prob, 0.03);
        assert_eq!(c.elite_count(), 100);
        assert_eq!(c.tournament_size, 2);
        assert_eq!(GAConfig::bernstein_vazirani().chromosome_length, 15);
        assert_eq!(GAConfig::bernstein_vazirani().generations, 500);
        assert_eq!(GAConfig::search().chromosome_length, 30);
        assert_eq!(GAConfig::search().generations, 800);
    }

    #[test]
    fn elite_count_rounds_down() {
        let c = GAConfig { population_size: 200, elitism_fraction: 0.1, ..GAConfig::default() };
        assert_eq!(c.elite_count(), 20);
        let c = GAConfig { population_size: 100, elitism_fraction: 0.29, ..GAConfig::default() };
        assert_eq!(c.elite_count(), 29);
        let c = GAConfig { population_size: 15, elitism_fraction: 0.1, ..GAConfig::default() };
        assert_eq!(c.elite_count(), 1);
    }

    #[test]
    fn invalid_configs() {
        let base = GAConfig::default();
        for bad in [
            GAConfig { population_size: 0, ..base.clone() },
            GAConfig { crossover_prob: 1.5, ..base.clone() },
            GAConfig { gate_swap_prob: -0.1, ..base.clone() },
            GAConfig { population_size: 5, elitism_fraction: 0.1, ..base.clone() },
            GAConfig { chromosome_length: 0, ..base.clone() },
            GAConfig { param_opt: ParamOpt::TopK { top_k: 0, max_iters: 5 }, ..base.clone() },
        ] {
            assert!(matches!(bad.validate(), Err(EvolveError::InvalidConfig(_))), "{bad:?}");
        }
    }

    #[test]
    fn single_individual_population() {
        let config = GAConfig { population_size: 1, elitism_fraction: 1.0, ..small_config() };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let pop = init_population(&config, 4, &mut rng).unwrap();
        assert_eq!(pop.len(), 1);
        assert_eq!(pop.individuals[0].chromosome.len(), 15);
    }

    #[test]
    fn seeded_population_is_reproducible() {
        let config = small_config();
        let a = init_population(&config, 4, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = init_population(&config, 4, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a, b);
        let c = init_population(&config, 4, &mut ChaCha8Rng::seed_from_u64(10)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn identity_pool_gives_flat_fitness() {
        let config = GAConfig {
            gate_set: GateSet::new([GateKind::Identity]).unwrap(),
            ..small_config()
        };
        let suite = make_bv_suite(3).unwrap();
        let mut pop = init_population(&config, 4, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        pop.evaluate(&suite, FitnessKind::Baseline).unwrap();
        let first = pop.individuals[0].fitness();
        assert!(pop.individuals.iter().all(|i| i.fitness() == first));
    }

    #[test]
    fn no_variation_with_full_elitism_keeps_population() {
        let config = GAConfig {
            crossover_prob: 0.0,
            gate_swap_prob: 0.0,
            elitism_fraction: 1.0,
            ..small_config()
        };
        let suite = make_bv_suite(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let pop = init_population(&config, 4, &mut rng).unwrap();
        let (next, _) = step_generation(pop.clone(), 0, &suite, FitnessKind::Baseline, &config, &mut rng).unwrap();
        let mut before: Vec<_> = pop.chromosomes().map(|c| format!("{c:?}")).collect();
        let mut after: Vec<_> = next.chromosomes().map(|c| format!("{c:?}")).collect();
        before.sort();
        after.sort();
        assert_eq!(before, after);
    }

    #[test]
    fn elite_carried_over_unaltered() {
        let config = GAConfig { population_size: 1000, ..GAConfig::bernstein_vazirani() };
        let suite = make_bv_suite(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut pop = init_population(&config, 4, &mut rng).unwrap();
        pop.evaluate(&suite, FitnessKind::Indirect).unwrap();
        let ranked: Vec<Individual> = pop.ranking().iter().take(100).map(|&i| pop.individuals[i].clone()).collect();
        let (next, stats) = step_generation(pop, 0, &suite, FitnessKind::Indirect, &config, &mut rng).unwrap();
        assert_eq!(&next.individuals[..100], &ranked[..]);
        assert_eq!(stats.min_fitness, ranked[0].fitness());
        assert_eq!(next.len(), 1000);
    }

    #[test]
    fn runs_are_deterministic_and_monotone() {
        let suite = make_bv_suite(3).unwrap();
        let config = small_config();
        let a = run_experiment(&config, &suite, FitnessKind::Indirect).unwrap();
        let b = run_experiment(&config, &suite, FitnessKind::Indirect).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 15);
        for w in a.windows(2) {
            assert!(w[1].min_fitness <= w[0].min_fitness + 1e-12);
        }
        for s in &a {
            assert!(s.min_fitness <= s.mean_fitness);
            assert_eq!(s.best_chromosome.len(), 15);
        }
    }

    #[test]
    fn zero_generations() {
        let suite = make_bv_suite(2).unwrap();
        let config = GAConfig { generations: 0, ..small_config() };
        assert!(run_experiment(&config, &suite, FitnessKind::Baseline).unwrap().is_empty());
    }

    #[test]
    fn swap_mutation_preserves_multiset() {
        let config = GAConfig { gate_swap_prob: 1.0, mutation: MutationMode::Swap, ..small_config() };
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let original = random_chromosome(15, 3, &config.gate_set, &mut rng).unwrap();
        let mut mutated = original.clone();
        mutate(&mut mutated, &config, 3, &mut rng).unwrap();
        let key = |c: &Chromosome| {
            let mut v: Vec<String> = c.genes().iter().map(|g| format!("{g:?}")).collect();
            v.sort();
            v
        };
        assert_eq!(key(&original), key(&mutated));
    }

    #[test]
    fn refinement_improves_rotation() {
        // RY(0.4) on q0 barely moves |00>; tuning the angle toward pi passes
        // the marked state 2 = |10>.
        let suite = make_search_suite(2).unwrap();
        let chrom = Chromosome::new(vec![GateSpec::rotation(GateKind::RY, 0, 0.4), GateSpec::cx(0, 1)]);
        let ind = Individual::new(chrom);
        let before = FitnessKind::Baseline.evaluate(&ind.chromosome, &suite).unwrap().fitness;
        let refined = refine_angles(&ind, &suite, FitnessKind::Baseline, 60).unwrap();
        assert!(refined.fitness() <= before);
        let angle = refined.chromosome.genes()[0].angle.unwrap();
        assert!((-PI..=PI).contains(&angle));
    }

    #[test]
    fn refinement_without_angles_is_noop() {
        let suite = make_bv_suite(2).unwrap();
        let ind = Individual::new(Chromosome::new(vec![GateSpec::h(0)]));
        let refined = refine_angles(&ind, &suite, FitnessKind::Direct, 50).unwrap();
        assert_eq!(refined.chromosome, ind.chromosome);
    }

    #[test]
    fn wrap_angle_range() {
        assert!((wrap_angle(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-12);
        assert!((wrap_angle(-3.0 * PI / 2.0) - PI / 2.0).abs() < 1e-12);
        assert_eq!(wrap_angle(0.3), 0.3);
    }
}
