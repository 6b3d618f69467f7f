//! Hand-built textbook circuits, encoded with the gene alphabet of
//! [`crate::gates`]. Used as known-good solutions when checking fitness
//! functions and when comparing evolved circuits against the state of the art.

use std::f64::consts::FRAC_PI_2;

use crate::gates::{Chromosome, GateKind, GateSpec};

/// Bernstein-Vazirani on `n` inputs: Hadamards on the inputs, ancilla
/// prepared with X then H, one oracle call, Hadamards on the inputs.
pub fn bernstein_vazirani(n_inputs: usize) -> Chromosome {
    let ancilla = n_inputs;
    let mut genes: Vec<GateSpec> = (0..n_inputs).map(GateSpec::h).collect();
    genes.push(GateSpec::x(ancilla));
    genes.push(GateSpec::h(ancilla));
    genes.push(GateSpec::oracle());
    genes.extend((0..n_inputs).map(GateSpec::h));
    Chromosome::new(genes)
}

/// Same circuit with the ancilla prepared in `|->` by a single `RY(-pi/2)`.
pub fn bernstein_vazirani_ry(n_inputs: usize) -> Chromosome {
    let ancilla = n_inputs;
    let mut genes: Vec<GateSpec> = (0..n_inputs).map(GateSpec::h).collect();
    genes.push(GateSpec::rotation(GateKind::RY, ancilla, -FRAC_PI_2));
    genes.push(GateSpec::oracle());
    genes.extend((0..n_inputs).map(GateSpec::h));
    Chromosome::new(genes)
}

/// Controlled phase `diag(1, 1, 1, e^{i theta})` up to a global phase of
/// `e^{-i theta / 4}`, built as `RZ(theta/2)` on the control and a
/// controlled `RZ(theta)`.
fn controlled_phase(control: usize, target: usize, theta: f64) -> [GateSpec; 2] {
    [
        GateSpec::controlled_rotation(GateKind::CRZ, control, target, theta),
        GateSpec::rotation(GateKind::RZ, control, theta / 2.0),
    ]
}

/// Doubly controlled Z on three qubits from single-control gates, up to a
/// global phase of `e^{-i pi / 8}`.
pub fn ccz(a: usize, b: usize, c: usize) -> Vec<GateSpec> {
    let mut genes = Vec::with_capacity(8);
    genes.extend(controlled_phase(b, c, FRAC_PI_2));
    genes.push(GateSpec::cx(a, b));
    genes.extend(controlled_phase(b, c, -FRAC_PI_2));
    genes.push(GateSpec::cx(a, b));
    genes.extend(controlled_phase(a, c, FRAC_PI_2));
    genes
}

/// Inversion about the mean on 2 or 3 qubits, up to global phase.
/// Returns `None` for other register sizes.
pub fn diffusion(num_qubits: usize) -> Option<Vec<GateSpec>> {
    let phase_flip_zero: Vec<GateSpec> = match num_qubits {
        2 => vec![GateSpec::controlled(GateKind::CZ, 0, 1)],
        3 => ccz(0, 1, 2),
        _ => return None,
    };
    let qubits = 0..num_qubits;
    let mut genes: Vec<GateSpec> = qubits.clone().map(GateSpec::h).collect();
    genes.extend(qubits.clone().map(GateSpec::x));
    genes.extend(phase_flip_zero);
    genes.extend(qubits.clone().map(GateSpec::x));
    genes.extend(qubits.map(GateSpec::h));
    Some(genes)
}

/// Grover search with `iterations` oracle/diffusion rounds on 2 or 3 qubits.
pub fn grover(num_qubits: usize, iterations: usize) -> Option<Chromosome> {
    let diffusion = diffusion(num_qubits)?;
    let mut genes: Vec<GateSpec> = (0..num_qubits).map(GateSpec::h).collect();
    for _ in 0..iterations {
        genes.push(GateSpec::oracle());
        genes.extend(diffusion.iter().copied());
    }
    Some(Chromosome::new(genes))
}

/// Index of the first gene after the last oracle call, or 0 without oracle.
pub fn post_oracle_start(chromosome: &Chromosome) -> usize {
    chromosome
        .genes()
        .iter()
        .rposition(|g| g.kind == GateKind::Oracle)
        .map_or(0, |i| i + 1)
}
