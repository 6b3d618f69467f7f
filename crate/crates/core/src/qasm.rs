//! OpenQASM 2.0 export and import for chromosomes.
//!
//! Identity genes are not written. Oracle genes become an opaque `oracle`
//! gate spanning the whole register. Angles are printed with Rust's shortest
//! round-trip float formatting, so export followed by import is exact.

use std::f64::consts::PI;

use thiserror::Error;

use crate::gates::{Chromosome, GateError, GateKind, GateSpec};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QasmError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unsupported gate `{name}`")]
    UnsupportedGate { line: usize, name: String },
    #[error("line {line}: {source}")]
    InvalidGate { line: usize, source: GateError },
    #[error("missing qreg declaration")]
    MissingRegister,
}

pub fn to_qasm(chromosome: &Chromosome, num_qubits: usize) -> String {
    let mut out = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    let all_qubits = |prefix: &str| {
        (0..num_qubits).map(|q| format!("{prefix}{q}")).collect::<Vec<_>>()
    };
    if chromosome.count_oracle_gates() > 0 {
        out.push_str(&format!("opaque oracle {};\n", all_qubits("a").join(",")));
    }
    out.push_str(&format!("qreg q[{num_qubits}];\n"));
    for gene in chromosome.genes() {
        match gene.kind {
            GateKind::Identity => {}
            GateKind::Oracle => {
                let args: Vec<String> = (0..num_qubits).map(|q| format!("q[{q}]")).collect();
                out.push_str(&format!("oracle {};\n", args.join(",")));
            }
            kind => {
                out.push_str(kind.mnemonic());
                if let Some(angle) = gene.angle {
                    out.push_str(&format!("({angle})"));
                }
                match gene.control {
                    Some(c) => out.push_str(&format!(" q[{c}],q[{}];\n", gene.target)),
                    None => out.push_str(&format!(" q[{}];\n", gene.target)),
                }
            }
        }
    }
    out
}

/// A parsed program: register width plus the gate list in file order.
#[derive(Debug, Clone, PartialEq)]
pub struct QasmCircuit {
    pub num_qubits: usize,
    pub chromosome: Chromosome,
}

pub fn from_qasm(text: &str) -> Result<QasmCircuit, QasmError> {
    let mut num_qubits = None;
    let mut genes = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let code = raw.split("//").next().unwrap_or("").trim();
        for stmt in code.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            let syntax = |message: &str| QasmError::Syntax { line, message: message.to_string() };
            if stmt.starts_with("OPENQASM")
                || stmt.starts_with("include")
                || stmt.starts_with("opaque")
                || stmt.starts_with("creg")
                || stmt.starts_with("barrier")
            {
                continue;
            }
            if let Some(rest) = stmt.strip_prefix("qreg") {
                let size = rest
                    .trim()
                    .strip_prefix("q[")
                    .and_then(|r| r.strip_suffix(']'))
                    .and_then(|n| n.parse::<usize>().ok())
                    .ok_or_else(|| syntax("expected `qreg q[<n>]`"))?;
                num_qubits = Some(size);
                continue;
            }
            let n = num_qubits.ok_or(QasmError::MissingRegister)?;
            let (head, args) = split_head(stmt).ok_or_else(|| syntax("expected `<gate> <args>`"))?;
            let (name, param) = match head.find('(') {
                Some(open) => {
                    let close = head.rfind(')').ok_or_else(|| syntax("unclosed parameter list"))?;
                    (&head[..open], Some(&head[open + 1..close]))
                }
                None => (head, None),
            };
            let kind = GateKind::from_mnemonic(name)
                .ok_or_else(|| QasmError::UnsupportedGate { line, name: name.to_string() })?;
            let qubits = args
                .split(',')
                .map(|a| parse_qubit(a.trim()))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| syntax("malformed qubit argument"))?;
            let angle = param
                .map(|p| parse_angle(p).ok_or_else(|| syntax("malformed angle")))
                .transpose()?;
            let gene = match kind {
                GateKind::Oracle => {
                    if qubits != (0..n).collect::<Vec<_>>() {
                        return Err(syntax("oracle must span the whole register in order"));
                    }
                    GateSpec::oracle()
                }
                k if k.is_controlled() => match qubits[..] {
                    [c, t] => GateSpec { kind: k, target: t, control: Some(c), angle },
                    _ => return Err(syntax("controlled gate takes two qubits")),
                },
                k => match qubits[..] {
                    [t] => GateSpec { kind: k, target: t, control: None, angle },
                    _ => return Err(syntax("single-qubit gate takes one qubit")),
                },
            };
            gene.validate(n).map_err(|source| QasmError::InvalidGate { line, source })?;
            genes.push(gene);
        }
    }
    let num_qubits = num_qubits.ok_or(QasmError::MissingRegister)?;
    Ok(QasmCircuit { num_qubits, chromosome: Chromosome::new(genes) })
}

fn split_head(stmt: &str) -> Option<(&str, &str)> {
    // The parameter list may contain spaces, so split after its closing paren.
    let split_at = match (stmt.find('('), stmt.find(char::is_whitespace)) {
        (Some(open), Some(ws)) if open < ws => stmt.find(')')? + 1,
        (_, Some(ws)) => ws,
        _ => return None,
    };
    let (head, args) = stmt.split_at(split_at);
    Some((head.trim(), args.trim()))
}

fn parse_qubit(arg: &str) -> Option<usize> {
    arg.strip_prefix("q[")?.strip_suffix(']')?.parse().ok()
}

/// Accepts a float literal or `[-][k*]pi[/m]`.
fn parse_angle(text: &str) -> Option<f64> {
    let text: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if let Ok(v) = text.parse::<f64>() {
        return Some(v);
    }
    let (sign, body) = match text.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, text.as_str()),
    };
    let (numer, denom) = match body.split_once('/') {
        Some((n, d)) => (n, d.parse::<f64>().ok()?),
        None => (body, 1.0),
    };
    let factor = match numer.strip_suffix("pi")? {
        "" => 1.0,
        k => k.strip_suffix('*')?.parse::<f64>().ok()?,
    };
    Some(sign * factor * PI / denom)
}
