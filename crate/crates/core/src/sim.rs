//! Dense statevector simulation.
//!
//! Qubit 0 is the most significant bit of a basis-state index: on three qubits
//! `|q0 q1 q2>` has index `4*q0 + 2*q1 + q2`. Gates are applied in place with a
//! strided two-amplitude update, so no full matrix is built while evolving;
//! [`extract_unitary`] builds one column by column on request.
//!
//! Global phase is never normalized away.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gates::{Chromosome, GateError, GateKind, GateSpec};

pub type C64 = Complex64;

/// Absolute tolerance used for normalization and unitarity checks.
pub const TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("invalid gate: {0}")]
    InvalidGate(#[from] GateError),
    #[error("invalid gate at position {position}: {source}")]
    InvalidGateAt { position: usize, source: GateError },
    #[error("oracle gene at position {0} but no oracle supplied")]
    MissingOracle(usize),
    #[error("oracle acts on {found} qubits, circuit has {expected}")]
    OracleDimension { expected: usize, found: usize },
    #[error("amplitude count {0} is not a power of two")]
    BadLength(usize),
    #[error("state norm {0} differs from 1")]
    NotNormalized(f64),
    #[error("probabilities sum to {0}, expected 1")]
    BadDistribution(f64),
    #[error("no qubits to measure")]
    EmptyMeasurement,
    #[error("qubit {0} listed twice")]
    DuplicateQubit(usize),
    #[error("qubit {index} out of range for {num_qubits} qubits")]
    QubitOutOfRange { index: usize, num_qubits: usize },
    #[error("start index {start} beyond chromosome length {len}")]
    StartOutOfRange { start: usize, len: usize },
}

/// A black-box unitary acting on the whole register.
pub trait Oracle: Sync {
    fn num_qubits(&self) -> usize;

    /// Applies the oracle in place. `amplitudes.len()` is `2^num_qubits()`.
    fn apply(&self, amplitudes: &mut [C64]);
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<C64>,
    num_qubits: usize,
}

impl StateVector {
    /// `|0...0>` on `num_qubits` qubits.
    pub fn zero(num_qubits: usize) -> Self {
        Self::basis(num_qubits, 0)
    }

    pub fn basis(num_qubits: usize, index: usize) -> Self {
        let mut amplitudes = vec![C64::new(0.0, 0.0); 1 << num_qubits];
        amplitudes[index] = C64::new(1.0, 0.0);
        StateVector { amplitudes, num_qubits }
    }

    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Result<Self, SimError> {
        let len = amplitudes.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(SimError::BadLength(len));
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > TOLERANCE {
            return Err(SimError::NotNormalized(norm));
        }
        Ok(StateVector { amplitudes, num_qubits: len.trailing_zeros() as usize })
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Applies one gene. Oracle genes are rejected here; use
    /// [`StateVector::apply_with_oracle`].
    pub fn apply(&mut self, gate: &GateSpec) -> Result<(), SimError> {
        gate.validate(self.num_qubits)?;
        if gate.kind == GateKind::Oracle {
            return Err(SimError::MissingOracle(0));
        }
        self.apply_unchecked(gate);
        Ok(())
    }

    pub fn apply_oracle(&mut self, oracle: &(impl Oracle + ?Sized)) -> Result<(), SimError> {
        if oracle.num_qubits() != self.num_qubits {
            return Err(SimError::OracleDimension {
                expected: self.num_qubits,
                found: oracle.num_qubits(),
            });
        }
        oracle.apply(&mut self.amplitudes);
        Ok(())
    }

    /// Applies `genes` in order, substituting `oracle` for oracle genes.
    /// `offset` is only used to report error positions.
    pub fn apply_with_oracle(
        &mut self,
        genes: &[GateSpec],
        offset: usize,
        oracle: Option<&dyn Oracle>,
    ) -> Result<(), SimError> {
        for (i, gate) in genes.iter().enumerate() {
            let position = offset + i;
            gate.validate(self.num_qubits)
                .map_err(|source| SimError::InvalidGateAt { position, source })?;
            if gate.kind == GateKind::Oracle {
                let oracle = oracle.ok_or(SimError::MissingOracle(position))?;
                self.apply_oracle(oracle)?;
            } else {
                self.apply_unchecked(gate);
            }
        }
        Ok(())
    }

    fn apply_unchecked(&mut self, gate: &GateSpec) {
        if gate.kind == GateKind::Identity {
            return;
        }
        let m = single_qubit_matrix(gate.kind, gate.angle.unwrap_or(0.0));
        let n = self.num_qubits;
        let target_mask = 1usize << (n - 1 - gate.target);
        let control_mask = gate.control.map_or(0, |c| 1usize << (n - 1 - c));
        for i in 0..self.amplitudes.len() {
            if i & target_mask != 0 || i & control_mask != control_mask {
                continue;
            }
            let j = i | target_mask;
            let a = self.amplitudes[i];
            let b = self.amplitudes[j];
            self.amplitudes[i] = m[0][0] * a + m[0][1] * b;
            self.amplitudes[j] = m[1][0] * a + m[1][1] * b;
        }
    }

    /// Full outcome distribution over all qubits.
    pub fn probabilities(&self) -> ProbabilityDistribution {
        ProbabilityDistribution {
            probabilities: self.amplitudes.iter().map(|a| a.norm_sqr()).collect(),
        }
    }

    /// Marginal distribution over `qubits`; the first listed qubit is the most
    /// significant bit of the outcome index.
    pub fn measure(&self, qubits: &[usize]) -> Result<ProbabilityDistribution, SimError> {
        if qubits.is_empty() {
            return Err(SimError::EmptyMeasurement);
        }
        let n = self.num_qubits;
        for (k, &q) in qubits.iter().enumerate() {
            if q >= n {
                return Err(SimError::QubitOutOfRange { index: q, num_qubits: n });
            }
            if qubits[..k].contains(&q) {
                return Err(SimError::DuplicateQubit(q));
            }
        }
        let m = qubits.len();
        let mut probabilities = vec![0.0; 1 << m];
        for (i, amp) in self.amplitudes.iter().enumerate() {
            let outcome = qubits
                .iter()
                .enumerate()
                .fold(0usize, |acc, (k, &q)| acc | (((i >> (n - 1 - q)) & 1) << (m - 1 - k)));
            probabilities[outcome] += amp.norm_sqr();
        }
        Ok(ProbabilityDistribution { probabilities })
    }
}

/// The 2x2 matrix acting on the target qubit. Controlled kinds return the
/// matrix applied when the control is set.
pub fn single_qubit_matrix(kind: GateKind, angle: f64) -> [[C64; 2]; 2] {
    let r = |x: f64| C64::new(x, 0.0);
    let zero = r(0.0);
    let one = r(1.0);
    let i = C64::new(0.0, 1.0);
    let (c, s) = ((angle / 2.0).cos(), (angle / 2.0).sin());
    match kind {
        GateKind::Identity | GateKind::Oracle => [[one, zero], [zero, one]],
        GateKind::H | GateKind::CH => {
            [[r(FRAC_1_SQRT_2), r(FRAC_1_SQRT_2)], [r(FRAC_1_SQRT_2), r(-FRAC_1_SQRT_2)]]
        }
        GateKind::X | GateKind::CX => [[zero, one], [one, zero]],
        GateKind::Y | GateKind::CY => [[zero, -i], [i, zero]],
        GateKind::Z | GateKind::CZ => [[one, zero], [zero, -one]],
        GateKind::RX | GateKind::CRX => [[r(c), -i * s], [-i * s, r(c)]],
        GateKind::RY | GateKind::CRY => [[r(c), r(-s)], [r(s), r(c)]],
        GateKind::RZ | GateKind::CRZ => {
            [[C64::from_polar(1.0, -angle / 2.0), zero], [zero, C64::from_polar(1.0, angle / 2.0)]]
        }
    }
}

/// Returns a new state with `gate` applied.
pub fn apply_gate(state: &StateVector, gate: &GateSpec) -> Result<StateVector, SimError> {
    let mut next = state.clone();
    next.apply(gate)?;
    Ok(next)
}

/// Runs the chromosome on `|0...0>`.
pub fn run_circuit(
    chromosome: &Chromosome,
    num_qubits: usize,
    oracle: Option<&dyn Oracle>,
) -> Result<StateVector, SimError> {
    let mut state = StateVector::zero(num_qubits);
    state.apply_with_oracle(chromosome.genes(), 0, oracle)?;
    Ok(state)
}

pub fn measure_probabilities(
    state: &StateVector,
    measured_qubits: &[usize],
) -> Result<ProbabilityDistribution, SimError> {
    state.measure(measured_qubits)
}

/// Unitary of the genes from `start_index` to the end, in application order.
pub fn extract_unitary(
    chromosome: &Chromosome,
    num_qubits: usize,
    start_index: usize,
    oracle: Option<&dyn Oracle>,
) -> Result<UnitaryMatrix, SimError> {
    let genes = chromosome.genes();
    if start_index > genes.len() {
        return Err(SimError::StartOutOfRange { start: start_index, len: genes.len() });
    }
    let dim = 1usize << num_qubits;
    let mut entries = vec![C64::new(0.0, 0.0); dim * dim];
    for col in 0..dim {
        let mut state = StateVector::basis(num_qubits, col);
        state.apply_with_oracle(&genes[start_index..], start_index, oracle)?;
        for (row, amp) in state.amplitudes.iter().enumerate() {
            entries[row * dim + col] = *amp;
        }
    }
    Ok(UnitaryMatrix { dim, entries })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityDistribution {
    probabilities: Vec<f64>,
}

impl ProbabilityDistribution {
    pub fn new(probabilities: Vec<f64>) -> Result<Self, SimError> {
        let sum: f64 = probabilities.iter().sum();
        if probabilities.is_empty()
            || probabilities.iter().any(|p| !(0.0..=1.0).contains(p))
            || (sum - 1.0).abs() > TOLERANCE
        {
            return Err(SimError::BadDistribution(sum));
        }
        Ok(ProbabilityDistribution { probabilities })
    }

    pub fn one_hot(num_outcomes: usize, index: usize) -> Self {
        let mut probabilities = vec![0.0; num_outcomes];
        probabilities[index] = 1.0;
        ProbabilityDistribution { probabilities }
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn num_outcomes(&self) -> usize {
        self.probabilities.len()
    }

    /// Index of the largest probability, lowest index on ties.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, &p) in self.probabilities.iter().enumerate() {
            if p > self.probabilities[best] {
                best = i;
            }
        }
        best
    }
}

/// Dense row-major square complex matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitaryMatrix {
    dim: usize,
    entries: Vec<C64>,
}

impl UnitaryMatrix {
    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![C64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = C64::new(1.0, 0.0);
        }
        UnitaryMatrix { dim, entries }
    }

    /// Builds a matrix from rows; rejects ragged or non-square input.
    pub fn from_rows(rows: Vec<Vec<C64>>) -> Option<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return None;
        }
        Some(UnitaryMatrix { dim, entries: rows.into_iter().flatten().collect() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[row * self.dim + col]
    }

    pub fn row(&self, row: usize) -> &[C64] {
        &self.entries[row * self.dim..(row + 1) * self.dim]
    }

    pub fn mul(&self, other: &UnitaryMatrix) -> UnitaryMatrix {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let d = self.dim;
        let mut entries = vec![C64::new(0.0, 0.0); d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.entries[i * d + k];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..d {
                    entries[i * d + j] += a * other.entries[k * d + j];
                }
            }
        }
        UnitaryMatrix { dim: d, entries }
    }

    pub fn adjoint(&self) -> UnitaryMatrix {
        let d = self.dim;
        let mut entries = vec![C64::new(0.0, 0.0); d * d];
        for i in 0..d {
            for j in 0..d {
                entries[j * d + i] = self.entries[i * d + j].conj();
            }
        }
        UnitaryMatrix { dim: d, entries }
    }

    /// Largest entrywise modulus of `U U^dagger - I`.
    pub fn unitarity_error(&self) -> f64 {
        let product = self.mul(&self.adjoint());
        let id = UnitaryMatrix::identity(self.dim);
        product
            .entries
            .iter()
            .zip(&id.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_unitary(&self) -> bool {
        self.unitarity_error() < TOLERANCE
    }

    /// Matrix-vector product.
    pub fn apply_to(&self, vector: &[C64]) -> Vec<C64> {
        let d = self.dim;
        (0..d)
            .map(|i| self.row(i).iter().zip(vector).map(|(a, v)| a * v).sum())
            .collect()
    }

    /// Plain-text table of real and imaginary parts, one matrix row per line.
    pub fn to_table(&self, precision: usize) -> String {
        let mut out = String::new();
        for i in 0..self.dim {
            let cells: Vec<String> = self
                .row(i)
                .iter()
                .map(|z| format!("{:>w$.p$}{:+.p$}i", z.re, z.im, w = precision + 3, p = precision))
                .collect();
            out.push_str(&cells.join("  "));
            out.push('\n');
        }
        out
    }
}

impl Oracle for UnitaryMatrix {
    fn num_qubits(&self) -> usize {
        self.dim.trailing_zeros() as usize
    }

    fn apply(&self, amplitudes: &mut [C64]) {
        let out = self.apply_to(amplitudes);
        amplitudes.copy_from_slice(&out);
    }
}
