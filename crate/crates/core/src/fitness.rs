//! Fitness functions. Lower is better.
//!
//! All three share the same hits/error core: every test case whose target
//! outcome reaches probability 0.52 is a hit, and every miss adds the
//! Jensen-Shannon distance between the produced and the target distribution.
//! While some cases fail the fitness is `hits + error / max(hits, 1)` where
//! `hits` counts the failing cases. Once everything passes:
//!
//! * [`FitnessKind::Baseline`] scores `countGates / 100000`,
//! * [`FitnessKind::Direct`] adds `countOracleGates / classicalOracleCalls`,
//! * [`FitnessKind::Indirect`] scores like the baseline but first adds a
//!   `#TestCases + 1` penalty for each missing superposition or entanglement
//!   gate family.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gates::{Chromosome, GateKind};
use crate::problems::ProblemSuite;
use crate::sim::{Oracle, ProbabilityDistribution, SimError, StateVector};

/// Minimum target probability for a test case to count as passed.
pub const PASS_THRESHOLD: f64 = 0.52;

/// Divisor of the gate count in the efficiency term.
pub const GATE_COUNT_SCALE: f64 = 100_000.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FitnessError {
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("distributions have {0} and {1} outcomes")]
    LengthMismatch(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitnessKind {
    Baseline,
    Direct,
    Indirect,
}

impl FitnessKind {
    pub const ALL: [FitnessKind; 3] = [FitnessKind::Baseline, FitnessKind::Direct, FitnessKind::Indirect];

    pub fn evaluate(self, chromosome: &Chromosome, suite: &ProblemSuite) -> Result<FitnessReport, FitnessError> {
        match self {
            FitnessKind::Baseline => baseline_fitness(chromosome, suite),
            FitnessKind::Direct => direct_qa_fitness(chromosome, suite),
            FitnessKind::Indirect => indirect_qa_fitness(chromosome, suite),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FitnessKind::Baseline => "baseline",
            FitnessKind::Direct => "direct",
            FitnessKind::Indirect => "indirect",
        }
    }
}

/// Scalar fitness plus the components it was assembled from. Components that
/// do not apply to the taken branch are zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitnessReport {
    pub fitness: f64,
    pub hits_remaining: usize,
    pub error_sum: f64,
    pub penalty: f64,
    pub oracle_ratio: f64,
    pub gate_term: f64,
}

impl FitnessReport {
    pub fn all_passed(&self) -> bool {
        self.hits_remaining == 0
    }
}

/// Jensen-Shannon distance with base-2 logarithms: the square root of the
/// divergence, so the result lies in [0, 1] and is a metric.
pub fn jensen_shannon_distance(p: &[f64], q: &[f64]) -> Result<f64, FitnessError> {
    if p.len() != q.len() {
        return Err(FitnessError::LengthMismatch(p.len(), q.len()));
    }
    // 0 * log(0) := 0
    let term = |a: f64, m: f64| if a > 0.0 { a * (a / m).log2() } else { 0.0 };
    let divergence: f64 = p
        .iter()
        .zip(q)
        .map(|(&a, &b)| {
            let m = 0.5 * (a + b);
            0.5 * (term(a, m) + term(b, m))
        })
        .sum();
    Ok(divergence.clamp(0.0, 1.0).sqrt())
}

/// Measured distribution of every test case, in suite order.
///
/// The genes before the first oracle call do not depend on the test case, so
/// that prefix is simulated once and shared.
pub fn case_distributions(
    chromosome: &Chromosome,
    suite: &ProblemSuite,
) -> Result<Vec<ProbabilityDistribution>, SimError> {
    let genes = chromosome.genes();
    let split = genes.iter().position(|g| g.kind == GateKind::Oracle).unwrap_or(genes.len());
    let mut prefix = StateVector::zero(suite.num_qubits);
    prefix.apply_with_oracle(&genes[..split], 0, None)?;
    suite
        .test_cases
        .iter()
        .map(|case| {
            let mut state = prefix.clone();
            state.apply_with_oracle(&genes[split..], split, Some(&case.oracle as &dyn Oracle))?;
            state.measure(&case.measured_qubits)
        })
        .collect()
}

/// Returns `(hits_remaining, error_sum)`.
pub fn evaluate_hits(chromosome: &Chromosome, suite: &ProblemSuite) -> Result<(usize, f64), FitnessError> {
    let distributions = case_distributions(chromosome, suite)?;
    let mut hits = suite.test_cases.len();
    let mut error = 0.0;
    for (case, produced) in suite.test_cases.iter().zip(&distributions) {
        let j = case.target_index();
        if passes(produced.probabilities()[j]) {
            hits -= 1;
        } else {
            error += jensen_shannon_distance(produced.probabilities(), case.target.probabilities())?;
        }
    }
    Ok((hits, error))
}

fn passes(target_probability: f64) -> bool {
    target_probability >= PASS_THRESHOLD
}

fn hits_term(hits: usize, error: f64) -> f64 {
    hits as f64 + error / hits.max(1) as f64
}

fn gate_term(chromosome: &Chromosome) -> f64 {
    chromosome.count_gates() as f64 / GATE_COUNT_SCALE
}

pub fn baseline_fitness(chromosome: &Chromosome, suite: &ProblemSuite) -> Result<FitnessReport, FitnessError> {
    let (hits, error) = evaluate_hits(chromosome, suite)?;
    Ok(if hits > 0 {
        failing_report(0.0, hits, error)
    } else {
        let gates = gate_term(chromosome);
        FitnessReport { fitness: gates, gate_term: gates, ..zero_report() }
    })
}

pub fn direct_qa_fitness(chromosome: &Chromosome, suite: &ProblemSuite) -> Result<FitnessReport, FitnessError> {
    let (hits, error) = evaluate_hits(chromosome, suite)?;
    Ok(if hits > 0 {
        failing_report(0.0, hits, error)
    } else {
        let ratio = chromosome.count_oracle_gates() as f64 / suite.classical_oracle_calls;
        let gates = gate_term(chromosome);
        FitnessReport { fitness: ratio + gates, oracle_ratio: ratio, gate_term: gates, ..zero_report() }
    })
}

pub fn indirect_qa_fitness(chromosome: &Chromosome, suite: &ProblemSuite) -> Result<FitnessReport, FitnessError> {
    let (hits, error) = evaluate_hits(chromosome, suite)?;
    let per_violation = (suite.test_cases.len() + 1) as f64;
    let mut penalty = 0.0;
    if !contains_superposition_gates(chromosome) {
        penalty += per_violation;
    }
    if !contains_entanglement_gates(chromosome) {
        penalty += per_violation;
    }
    Ok(if hits > 0 {
        failing_report(penalty, hits, error)
    } else {
        let gates = gate_term(chromosome);
        FitnessReport { fitness: penalty + gates, penalty, gate_term: gates, ..zero_report() }
    })
}

pub fn contains_superposition_gates(chromosome: &Chromosome) -> bool {
    chromosome.contains_superposition_gates()
}

pub fn contains_entanglement_gates(chromosome: &Chromosome) -> bool {
    chromosome.contains_entanglement_gates()
}

fn zero_report() -> FitnessReport {
    FitnessReport { fitness: 0.0, hits_remaining: 0, error_sum: 0.0, penalty: 0.0, oracle_ratio: 0.0, gate_term: 0.0 }
}

fn failing_report(penalty: f64, hits: usize, error: f64) -> FitnessReport {
    FitnessReport {
        fitness: penalty + hits_term(hits, error),
        hits_remaining: hits,
        error_sum: error,
        penalty,
        ..zero_report()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::GateSpec;
    use crate::problems::{make_bv_suite, make_search_suite};

    /// Direct evaluation of the base-2 definition, independent of the
    /// implementation's clamping and term layout.
    fn jsd_reference(p: &[f64], q: &[f64]) -> f64 {
        let kl = |a: &[f64], b: &[f64]| -> f64 {
            a.iter().zip(b).filter(|(x, _)| **x > 0.0).map(|(x, y)| x * (x / y).log2()).sum()
        };
        let m: Vec<f64> = p.iter().zip(q).map(|(a, b)| (a + b) / 2.0).collect();
        (0.5 * kl(p, &m) + 0.5 * kl(q, &m)).sqrt()
    }

    #[test]
    fn jsd_examples() {
        assert_eq!(jensen_shannon_distance(&[0.5, 0.5], &[0.5, 0.5]).unwrap(), 0.0);
        assert!((jensen_shannon_distance(&[1.0, 0.0], &[0.0, 1.0]).unwrap() - 1.0).abs() < 1e-12);
        let d = jensen_shannon_distance(&[1.0, 0.0], &[0.5, 0.5]).unwrap();
        // 0.5 * log2(4/3) + 0.25 * log2(2/3) + 0.25, square-rooted
        let frozen = (0.5 * (4.0f64 / 3.0).log2() + 0.25 * (2.0f64 / 3.0).log2() + 0.25).sqrt();
        assert!((d - 0.5579).abs() < 1e-3, "{d}");
        assert!((d - frozen).abs() < 1e-12);
        assert!((d - jsd_reference(&[1.0, 0.0], &[0.5, 0.5])).abs() < 1e-12);
    }

    #[test]
    fn jsd_length_mismatch() {
        assert_eq!(
            jensen_shannon_distance(&[1.0], &[0.5, 0.5]),
            Err(FitnessError::LengthMismatch(1, 2))
        );
    }

    #[test]
    fn identity_on_bv_passes_only_zero_string() {
        let suite = make_bv_suite(3).unwrap();
        let chrom = Chromosome::identity(15);
        let (hits, error) = evaluate_hits(&chrom, &suite).unwrap();
        assert_eq!(hits, 7);
        // Every failing case measures |000> with certainty against a one-hot
        // target elsewhere: disjoint supports, distance 1 each.
        assert!((error - 7.0).abs() < 1e-12);
        let report = baseline_fitness(&chrom, &suite).unwrap();
        assert!((report.fitness - (7.0 + error / 7.0)).abs() < 1e-12);
        assert_eq!(report.gate_term, 0.0);
    }

    #[test]
    fn threshold_is_inclusive() {
        assert!(passes(0.52));
        assert!(passes(1.0));
        assert!(!passes(0.519_999_999));
        // RY(theta) on q0 with P(1) = sin^2(theta/2) = 0.6 passes the marked
        // state 2 = |10> and nothing else.
        let theta = 2.0 * (0.6f64).sqrt().asin();
        let suite = make_search_suite(2).unwrap();
        let chrom = Chromosome::new(vec![GateSpec::rotation(GateKind::RY, 0, theta)]);
        let dists = case_distributions(&chrom, &suite).unwrap();
        assert!((dists[2].probabilities()[2] - 0.6).abs() < 1e-12);
        assert_eq!(evaluate_hits(&chrom, &suite).unwrap().0, 3);
    }

    #[test]
    fn indirect_penalties_on_identity_search() {
        let suite = make_search_suite(3).unwrap();
        let chrom = Chromosome::identity(30);
        let (hits, error) = evaluate_hits(&chrom, &suite).unwrap();
        assert_eq!(hits, 7);
        let report = indirect_qa_fitness(&chrom, &suite).unwrap();
        assert_eq!(report.penalty, 18.0);
        assert!((report.fitness - (18.0 + 7.0 + error / 7.0)).abs() < 1e-12);
    }

    #[test]
    fn indirect_single_penalty_for_missing_entanglement() {
        let suite = make_bv_suite(3).unwrap();
        // Two Hadamards spread the inputs over four outcomes at 0.25 each, so
        // every case fails; superposition present, no controlled gate.
        let chrom = Chromosome::new(vec![GateSpec::h(0), GateSpec::h(1)]);
        let (hits, error) = evaluate_hits(&chrom, &suite).unwrap();
        assert_eq!(hits, 8);
        let report = indirect_qa_fitness(&chrom, &suite).unwrap();
        assert_eq!(report.penalty, 9.0);
        assert!((report.fitness - (9.0 + hits as f64 + error / hits as f64)).abs() < 1e-12);
    }

    #[test]
    fn report_serializes() {
        let suite = make_bv_suite(1).unwrap();
        let report = baseline_fitness(&Chromosome::identity(3), &suite).unwrap();
        let json = serde_json::to_value(report).unwrap();
        assert_eq!(json["hits_remaining"], 1);
        assert!(json.get("oracle_ratio").is_some());
    }
}
