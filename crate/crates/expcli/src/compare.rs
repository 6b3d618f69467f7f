//! Side-by-side comparison of an evolved circuit with the classical baseline
//! and the textbook quantum algorithm for the same problem.

use std::fmt::Write as _;

use qevo::fitness::{case_distributions, evaluate_hits, PASS_THRESHOLD};
use qevo::gates::Chromosome;
use qevo::problems::{ProblemKind, ProblemSuite};
use qevo::reference;
use qevo::sim::{extract_unitary, UnitaryMatrix};
use serde::Serialize;

use crate::ExperimentError;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseProbability {
    pub oracle_parameter: usize,
    pub target_index: usize,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub problem: ProblemKind,
    pub gate_count: usize,
    pub oracle_calls: usize,
    pub classical_oracle_calls: f64,
    /// Quantum oracle calls over classical ones.
    pub oracle_ratio: f64,
    pub textbook_gate_count: Option<usize>,
    pub textbook_oracle_calls: Option<usize>,
    pub cases: Vec<CaseProbability>,
    pub min_probability: f64,
    /// Search only: unitary of the genes after the last oracle call.
    pub post_oracle_unitary: Option<UnitaryMatrix>,
    /// Search only: the same block of the one-iteration Grover circuit.
    pub textbook_post_oracle_unitary: Option<UnitaryMatrix>,
    /// Largest difference of entry magnitudes between the two blocks above.
    pub magnitude_gap: Option<f64>,
}

/// Compares `best` with the classical and textbook solutions of `suite`.
/// Fails unless `best` passes every test case.
pub fn compare_to_reference(best: &Chromosome, suite: &ProblemSuite) -> Result<ComparisonReport, ExperimentError> {
    let (hits, _) = evaluate_hits(best, suite)?;
    if hits > 0 {
        return Err(ExperimentError::NotASolution(hits));
    }
    let cases: Vec<CaseProbability> = case_distributions(best, suite)?
        .iter()
        .zip(&suite.test_cases)
        .map(|(dist, case)| CaseProbability {
            oracle_parameter: case.oracle.parameter,
            target_index: case.target_index(),
            probability: dist.probabilities()[case.target_index()],
        })
        .collect();
    let min_probability = cases.iter().map(|c| c.probability).fold(f64::INFINITY, f64::min);
    debug_assert!(min_probability >= PASS_THRESHOLD);

    let textbook = match suite.problem {
        ProblemKind::BernsteinVazirani => Some(reference::bernstein_vazirani(suite.num_input_bits)),
        ProblemKind::Search => reference::grover(suite.num_qubits, 1),
    };

    let (mut post, mut textbook_post, mut gap) = (None, None, None);
    if suite.problem == ProblemKind::Search {
        let n = suite.num_qubits;
        let evolved = extract_unitary(best, n, reference::post_oracle_start(best), None)?;
        if let Some(tb) = &textbook {
            let tb_unitary = extract_unitary(tb, n, reference::post_oracle_start(tb), None)?;
            gap = Some(magnitude_gap(&evolved, &tb_unitary));
            textbook_post = Some(tb_unitary);
        }
        post = Some(evolved);
    }

    let oracle_calls = best.count_oracle_gates();
    Ok(ComparisonReport {
        problem: suite.problem,
        gate_count: best.count_gates(),
        oracle_calls,
        classical_oracle_calls: suite.classical_oracle_calls,
        oracle_ratio: oracle_calls as f64 / suite.classical_oracle_calls,
        textbook_gate_count: textbook.as_ref().map(Chromosome::count_gates),
        textbook_oracle_calls: textbook.as_ref().map(Chromosome::count_oracle_gates),
        cases,
        min_probability,
        post_oracle_unitary: post,
        textbook_post_oracle_unitary: textbook_post,
        magnitude_gap: gap,
    })
}

fn magnitude_gap(a: &UnitaryMatrix, b: &UnitaryMatrix) -> f64 {
    let mut gap: f64 = 0.0;
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            gap = gap.max((a.get(i, j).norm() - b.get(i, j).norm()).abs());
        }
    }
    gap
}

impl ComparisonReport {
    /// Human-readable summary.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "problem: {:?}", self.problem);
        let _ = writeln!(out, "gates: {}", self.gate_count);
        let _ = writeln!(
            out,
            "oracle calls: {} (classical {}, ratio {:.4})",
            self.oracle_calls, self.classical_oracle_calls, self.oracle_ratio
        );
        if let (Some(g), Some(o)) = (self.textbook_gate_count, self.textbook_oracle_calls) {
            let _ = writeln!(out, "textbook circuit: {g} gates, {o} oracle calls");
        }
        let _ = writeln!(out, "target probabilities:");
        for c in &self.cases {
            let _ = writeln!(
                out,
                "  oracle {:>3}  target {:>3}  p = {:.6}",
                c.oracle_parameter, c.target_index, c.probability
            );
        }
        let _ = writeln!(out, "minimum: {:.6}", self.min_probability);
        if let Some(u) = &self.post_oracle_unitary {
            let _ = writeln!(out, "\npost-oracle unitary:\n{}", u.to_table(3));
        }
        if let Some(u) = &self.textbook_post_oracle_unitary {
            let _ = writeln!(out, "textbook post-oracle unitary:\n{}", u.to_table(3));
        }
        if let Some(gap) = self.magnitude_gap {
            let _ = writeln!(out, "largest magnitude difference: {gap:.3e}");
        }
        out
    }
}
