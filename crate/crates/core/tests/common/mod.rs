//! Brute-force dense reference simulator for tests.
//!
//! Every gate is expanded to a full `2^n x 2^n` matrix with Kronecker
//! products of textbook 2x2 matrices and circuits are multiplied out
//! explicitly. Nothing here goes through the strided update in `qevo::sim`.

#![allow(dead_code)]

use num_complex::Complex64 as C;
use qevo::gates::{Chromosome, GateKind, GateSpec};

pub type Dense = Vec<Vec<C>>;

fn r(x: f64) -> C {
    C::new(x, 0.0)
}

pub fn identity(dim: usize) -> Dense {
    (0..dim).map(|i| (0..dim).map(|j| r(if i == j { 1.0 } else { 0.0 })).collect()).collect()
}

pub fn kron(a: &Dense, b: &Dense) -> Dense {
    let (n, m) = (a.len(), b.len());
    let mut out = vec![vec![r(0.0); n * m]; n * m];
    for i in 0..n {
        for j in 0..n {
            for k in 0..m {
                for l in 0..m {
                    out[i * m + k][j * m + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

pub fn matmul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

pub fn add(a: &Dense, b: &Dense) -> Dense {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(p, q)| p + q).collect()).collect()
}

pub fn matvec(a: &Dense, v: &[C]) -> Vec<C> {
    a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

/// Textbook 2x2 matrix of the operation applied to the target.
pub fn base_matrix(kind: GateKind, angle: f64) -> Dense {
    let s2 = std::f64::consts::FRAC_1_SQRT_2;
    let i = C::new(0.0, 1.0);
    let (c, s) = ((angle / 2.0).cos(), (angle / 2.0).sin());
    match kind {
        GateKind::Identity | GateKind::Oracle => identity(2),
        GateKind::H | GateKind::CH => vec![vec![r(s2), r(s2)], vec![r(s2), r(-s2)]],
        GateKind::X | GateKind::CX => vec![vec![r(0.0), r(1.0)], vec![r(1.0), r(0.0)]],
        GateKind::Y | GateKind::CY => vec![vec![r(0.0), -i], vec![i, r(0.0)]],
        GateKind::Z | GateKind::CZ => vec![vec![r(1.0), r(0.0)], vec![r(0.0), r(-1.0)]],
        GateKind::RX | GateKind::CRX => vec![vec![r(c), -i * s], vec![-i * s, r(c)]],
        GateKind::RY | GateKind::CRY => vec![vec![r(c), r(-s)], vec![r(s), r(c)]],
        GateKind::RZ | GateKind::CRZ => vec![
            vec![(-i * angle / 2.0).exp(), r(0.0)],
            vec![r(0.0), (i * angle / 2.0).exp()],
        ],
    }
}

/// Kronecker product over qubits 0..n (qubit 0 leftmost = most significant).
fn embed(n: usize, factors: &dyn Fn(usize) -> Dense) -> Dense {
    (1..n).fold(factors(0), |acc, q| kron(&acc, &factors(q)))
}

/// Full matrix of one non-oracle gene.
pub fn gate_matrix(gate: &GateSpec, n: usize) -> Dense {
    let m = base_matrix(gate.kind, gate.angle.unwrap_or(0.0));
    match gate.control {
        None => embed(n, &|q| if q == gate.target { m.clone() } else { identity(2) }),
        Some(c) => {
            let p0 = vec![vec![r(1.0), r(0.0)], vec![r(0.0), r(0.0)]];
            let p1 = vec![vec![r(0.0), r(0.0)], vec![r(0.0), r(1.0)]];
            let off = embed(n, &|q| if q == c { p0.clone() } else { identity(2) });
            let on = embed(n, &|q| {
                if q == c {
                    p1.clone()
                } else if q == gate.target {
                    m.clone()
                } else {
                    identity(2)
                }
            });
            add(&off, &on)
        }
    }
}

/// Product of gene matrices from `start`, with `oracle` substituted for
/// oracle genes.
pub fn circuit_matrix(chrom: &Chromosome, n: usize, start: usize, oracle: Option<&Dense>) -> Dense {
    chrom.genes()[start..].iter().fold(identity(1 << n), |acc, g| {
        let gm = if g.kind == GateKind::Oracle {
            oracle.expect("oracle gene without oracle").clone()
        } else {
            gate_matrix(g, n)
        };
        matmul(&gm, &acc)
    })
}

/// Output amplitudes of the circuit on |0...0>.
pub fn run(chrom: &Chromosome, n: usize, oracle: Option<&Dense>) -> Vec<C> {
    let mut zero = vec![r(0.0); 1 << n];
    zero[0] = r(1.0);
    matvec(&circuit_matrix(chrom, n, 0, oracle), &zero)
}

/// Bernstein-Vazirani oracle built from its truth table: |x>|a> -> |x>|a ^ s.x>.
pub fn bv_oracle(n_inputs: usize, s: usize) -> Dense {
    let dim = 1 << (n_inputs + 1);
    let mut u = vec![vec![r(0.0); dim]; dim];
    for x in 0..(1 << n_inputs) {
        let f = (0..n_inputs).map(|b| ((s >> b) & 1) * ((x >> b) & 1)).sum::<usize>() % 2;
        for a in 0..2 {
            u[x * 2 + (a ^ f)][x * 2 + a] = r(1.0);
        }
    }
    u
}

/// Phase oracle I - 2|m><m|.
pub fn search_oracle(n: usize, m: usize) -> Dense {
    let mut u = identity(1 << n);
    u[m][m] = r(-1.0);
    u
}

/// Marginal probability of `outcome` on the leading `k` qubits.
pub fn leading_marginal(amps: &[C], n: usize, k: usize, outcome: usize) -> f64 {
    amps.iter().enumerate().filter(|(i, _)| i >> (n - k) == outcome).map(|(_, a)| a.norm_sqr()).sum()
}
