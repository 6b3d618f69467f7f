//! Test-case suites for the two benchmark problems.
//!
//! Bernstein-Vazirani on `n` input bits uses `n + 1` qubits: inputs `q0..q(n-1)`
//! and the ancilla `q(n)`. The oracle XORs `s.x mod 2` into the ancilla and the
//! target is the hidden string read from the input qubits only.
//!
//! Unstructured search on `n` qubits uses a phase oracle that flips the sign of
//! the marked basis state; the target is the marked index over all qubits.
//!
//! Bit strings follow the simulator convention: qubit 0 is the most
//! significant bit.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sim::{Oracle, ProbabilityDistribution, UnitaryMatrix, C64};

/// Largest register the suites are built for. Suites hold `2^n` cases and
/// each case may be expanded to a dense unitary, so this stays small.
pub const MAX_QUBITS: usize = 12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProblemError {
    #[error("{problem:?} needs at least {min} bits, got {got}")]
    TooSmall { problem: ProblemKind, min: usize, got: usize },
    #[error("{problem:?} with {got} bits exceeds the {MAX_QUBITS}-qubit limit")]
    TooLarge { problem: ProblemKind, got: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemKind {
    #[serde(alias = "bv")]
    BernsteinVazirani,
    Search,
}

impl ProblemKind {
    pub fn name(self) -> &'static str {
        match self {
            ProblemKind::BernsteinVazirani => "bernstein_vazirani",
            ProblemKind::Search => "search",
        }
    }
}

/// One oracle instance. `parameter` is the hidden string `s` (BV) or the
/// marked index `m` (search).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleSpec {
    pub problem: ProblemKind,
    pub parameter: usize,
    pub num_qubits: usize,
}

impl OracleSpec {
    /// Dense matrix of the oracle, built from its action on basis states.
    pub fn unitary(&self) -> UnitaryMatrix {
        let dim = 1usize << self.num_qubits;
        let mut rows = vec![vec![C64::new(0.0, 0.0); dim]; dim];
        for col in 0..dim {
            let mut basis = vec![C64::new(0.0, 0.0); dim];
            basis[col] = C64::new(1.0, 0.0);
            self.apply(&mut basis);
            for (row, amp) in basis.into_iter().enumerate() {
                rows[row][col] = amp;
            }
        }
        UnitaryMatrix::from_rows(rows).expect("square by construction")
    }
}

impl Oracle for OracleSpec {
    fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    fn apply(&self, amplitudes: &mut [C64]) {
        match self.problem {
            ProblemKind::BernsteinVazirani => {
                // Ancilla is the least significant bit; x is the rest.
                for i in (0..amplitudes.len()).step_by(2) {
                    let x = i >> 1;
                    if (x & self.parameter).count_ones() % 2 == 1 {
                        amplitudes.swap(i, i | 1);
                    }
                }
            }
            ProblemKind::Search => amplitudes[self.parameter] = -amplitudes[self.parameter],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TestCase {
    pub oracle: OracleSpec,
    pub target: ProbabilityDistribution,
    pub measured_qubits: Vec<usize>,
}

impl TestCase {
    pub fn target_index(&self) -> usize {
        self.target.argmax()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSuite {
    pub problem: ProblemKind,
    pub num_input_bits: usize,
    pub num_qubits: usize,
    pub test_cases: Vec<TestCase>,
    pub classical_oracle_calls: f64,
}

/// One test case per hidden string `s` in `{0,1}^n`; `n` classical queries.
pub fn make_bv_suite(n_input_bits: usize) -> Result<ProblemSuite, ProblemError> {
    let problem = ProblemKind::BernsteinVazirani;
    if n_input_bits < 1 {
        return Err(ProblemError::TooSmall { problem, min: 1, got: n_input_bits });
    }
    if n_input_bits + 1 > MAX_QUBITS {
        return Err(ProblemError::TooLarge { problem, got: n_input_bits });
    }
    let num_qubits = n_input_bits + 1;
    let measured: Vec<usize> = (0..n_input_bits).collect();
    let test_cases = (0..1usize << n_input_bits)
        .map(|s| TestCase {
            oracle: OracleSpec { problem, parameter: s, num_qubits },
            target: ProbabilityDistribution::one_hot(1 << n_input_bits, s),
            measured_qubits: measured.clone(),
        })
        .collect();
    Ok(ProblemSuite {
        problem,
        num_input_bits: n_input_bits,
        num_qubits,
        test_cases,
        classical_oracle_calls: n_input_bits as f64,
    })
}

/// One test case per marked index; `N/2` classical queries on average.
pub fn make_search_suite(n_qubits: usize) -> Result<ProblemSuite, ProblemError> {
    let problem = ProblemKind::Search;
    if n_qubits < 2 {
        return Err(ProblemError::TooSmall { problem, min: 2, got: n_qubits });
    }
    if n_qubits > MAX_QUBITS {
        return Err(ProblemError::TooLarge { problem, got: n_qubits });
    }
    let dim = 1usize << n_qubits;
    let measured: Vec<usize> = (0..n_qubits).collect();
    let test_cases = (0..dim)
        .map(|m| TestCase {
            oracle: OracleSpec { problem, parameter: m, num_qubits: n_qubits },
            target: ProbabilityDistribution::one_hot(dim, m),
            measured_qubits: measured.clone(),
        })
        .collect();
    Ok(ProblemSuite {
        problem,
        num_input_bits: n_qubits,
        num_qubits: n_qubits,
        test_cases,
        classical_oracle_calls: dim as f64 / 2.0,
    })
}

pub fn make_suite(problem: ProblemKind, n: usize) -> Result<ProblemSuite, ProblemError> {
    match problem {
        ProblemKind::BernsteinVazirani => make_bv_suite(n),
        ProblemKind::Search => make_search_suite(n),
    }
}

/// Provenance record of a suite, suitable for JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteDescription {
    pub problem: ProblemKind,
    pub num_input_bits: usize,
    pub num_qubits: usize,
    pub classical_oracle_calls: f64,
    pub test_cases: Vec<TestCaseDescription>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestCaseDescription {
    pub oracle_parameter: usize,
    pub target_index: usize,
    pub measured_qubits: Vec<usize>,
}

impl ProblemSuite {
    pub fn len(&self) -> usize {
        self.test_cases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.test_cases.is_empty()
    }

    pub fn describe(&self) -> SuiteDescription {
        SuiteDescription {
            problem: self.problem,
            num_input_bits: self.num_input_bits,
            num_qubits: self.num_qubits,
            classical_oracle_calls: self.classical_oracle_calls,
            test_cases: self
                .test_cases
                .iter()
                .map(|tc| TestCaseDescription {
                    oracle_parameter: tc.oracle.parameter,
                    target_index: tc.target_index(),
                    measured_qubits: tc.measured_qubits.clone(),
                })
                .collect(),
        }
    }
}
