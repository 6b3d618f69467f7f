//! Gate catalog and the fixed-length chromosome that the GA evolves.
//!
//! A [`Chromosome`] is a list of [`GateSpec`] genes. Unused positions hold
//! explicit [`GateKind::Identity`] genes so that every chromosome of a run has
//! the same length. An [`GateKind::Oracle`] gene is a placeholder for the
//! problem's black-box unitary and always acts on every qubit of the register.

use std::f64::consts::PI;
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GateError {
    #[error("gate set is empty")]
    EmptyGateSet,
    #[error("controlled gate {0:?} needs at least two qubits, register has {1}")]
    TooFewQubits(GateKind, usize),
    #[error("qubit index {index} out of range for {num_qubits} qubits")]
    QubitOutOfRange { index: usize, num_qubits: usize },
    #[error("control and target of {0:?} are both qubit {1}")]
    ControlIsTarget(GateKind, usize),
    #[error("{0:?} requires a control qubit")]
    MissingControl(GateKind),
    #[error("{0:?} does not take a control qubit")]
    UnexpectedControl(GateKind),
    #[error("{0:?} requires an angle parameter")]
    MissingAngle(GateKind),
    #[error("{0:?} does not take an angle parameter")]
    UnexpectedAngle(GateKind),
    #[error("angle {0} outside [-pi, pi]")]
    AngleOutOfRange(f64),
}

/// Every gate the synthesizer knows about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GateKind {
    Identity,
    H,
    X,
    Y,
    Z,
    RX,
    RY,
    RZ,
    CX,
    CY,
    CZ,
    CH,
    CRX,
    CRY,
    CRZ,
    Oracle,
}

impl GateKind {
    pub const ALL: [GateKind; 16] = [
        GateKind::Identity,
        GateKind::H,
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
        GateKind::RX,
        GateKind::RY,
        GateKind::RZ,
        GateKind::CX,
        GateKind::CY,
        GateKind::CZ,
        GateKind::CH,
        GateKind::CRX,
        GateKind::CRY,
        GateKind::CRZ,
        GateKind::Oracle,
    ];

    pub fn is_parameterized(self) -> bool {
        matches!(
            self,
            GateKind::RX | GateKind::RY | GateKind::RZ | GateKind::CRX | GateKind::CRY | GateKind::CRZ
        )
    }

    pub fn is_controlled(self) -> bool {
        matches!(
            self,
            GateKind::CX
                | GateKind::CY
                | GateKind::CZ
                | GateKind::CH
                | GateKind::CRX
                | GateKind::CRY
                | GateKind::CRZ
        )
    }

    /// Gates that can take a basis state into a superposition: the Hadamard,
    /// x- and y-axis rotations, and their controlled versions.
    pub fn creates_superposition(self) -> bool {
        matches!(
            self,
            GateKind::H | GateKind::RX | GateKind::RY | GateKind::CH | GateKind::CRX | GateKind::CRY
        )
    }

    /// Lower-case mnemonic, shared by the QASM export and the text diagram.
    pub fn mnemonic(self) -> &'static str {
        match self {
            GateKind::Identity => "id",
            GateKind::H => "h",
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::RX => "rx",
            GateKind::RY => "ry",
            GateKind::RZ => "rz",
            GateKind::CX => "cx",
            GateKind::CY => "cy",
            GateKind::CZ => "cz",
            GateKind::CH => "ch",
            GateKind::CRX => "crx",
            GateKind::CRY => "cry",
            GateKind::CRZ => "crz",
            GateKind::Oracle => "oracle",
        }
    }

    pub fn from_mnemonic(name: &str) -> Option<GateKind> {
        GateKind::ALL.into_iter().find(|k| k.mnemonic() == name)
    }
}

/// One gene: a gate kind applied to concrete qubits.
///
/// `control` is present iff the kind is controlled and `angle` is present iff
/// the kind is parameterized. For [`GateKind::Oracle`] the target is unused and
/// kept at 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GateSpec {
    pub kind: GateKind,
    pub target: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub control: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle: Option<f64>,
}

impl GateSpec {
    pub fn single(kind: GateKind, target: usize) -> Self {
        GateSpec { kind, target, control: None, angle: None }
    }

    pub fn rotation(kind: GateKind, target: usize, angle: f64) -> Self {
        GateSpec { kind, target, control: None, angle: Some(angle) }
    }

    pub fn controlled(kind: GateKind, control: usize, target: usize) -> Self {
        GateSpec { kind, target, control: Some(control), angle: None }
    }

    pub fn controlled_rotation(kind: GateKind, control: usize, target: usize, angle: f64) -> Self {
        GateSpec { kind, target, control: Some(control), angle: Some(angle) }
    }

    pub fn identity(target: usize) -> Self {
        Self::single(GateKind::Identity, target)
    }

    pub fn h(target: usize) -> Self {
        Self::single(GateKind::H, target)
    }

    pub fn x(target: usize) -> Self {
        Self::single(GateKind::X, target)
    }

    pub fn y(target: usize) -> Self {
        Self::single(GateKind::Y, target)
    }

    pub fn z(target: usize) -> Self {
        Self::single(GateKind::Z, target)
    }

    pub fn cx(control: usize, target: usize) -> Self {
        Self::controlled(GateKind::CX, control, target)
    }

    pub fn oracle() -> Self {
        Self::single(GateKind::Oracle, 0)
    }

    /// Checks the gene against a register of `num_qubits` qubits.
    pub fn validate(&self, num_qubits: usize) -> Result<(), GateError> {
        let kind = self.kind;
        if kind != GateKind::Oracle && self.target >= num_qubits {
            return Err(GateError::QubitOutOfRange { index: self.target, num_qubits });
        }
        match (kind.is_controlled(), self.control) {
            (true, None) => return Err(GateError::MissingControl(kind)),
            (false, Some(_)) => return Err(GateError::UnexpectedControl(kind)),
            (true, Some(c)) if c >= num_qubits => {
                return Err(GateError::QubitOutOfRange { index: c, num_qubits })
            }
            (true, Some(c)) if c == self.target => return Err(GateError::ControlIsTarget(kind, c)),
            _ => {}
        }
        match (kind.is_parameterized(), self.angle) {
            (true, None) => Err(GateError::MissingAngle(kind)),
            (false, Some(_)) => Err(GateError::UnexpectedAngle(kind)),
            (true, Some(a)) if !(-PI..=PI).contains(&a) => Err(GateError::AngleOutOfRange(a)),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for GateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.kind.mnemonic().to_uppercase();
        if self.kind == GateKind::Oracle {
            return f.write_str("ORACLE [all qubits]");
        }
        f.write_str(&name)?;
        if let Some(angle) = self.angle {
            write!(f, "({angle:.6})")?;
        }
        match self.control {
            Some(c) => write!(f, " q{c} -> q{}", self.target),
            None => write!(f, " q{}", self.target),
        }
    }
}

/// Fixed-length gate sequence evolved by the GA.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Chromosome {
    genes: Vec<GateSpec>,
}

impl Chromosome {
    pub fn new(genes: Vec<GateSpec>) -> Self {
        Chromosome { genes }
    }

    /// A chromosome of `length` identity genes.
    pub fn identity(length: usize) -> Self {
        Chromosome { genes: vec![GateSpec::identity(0); length] }
    }

    /// Pads `genes` with identity genes up to `length`. Longer inputs are kept
    /// as they are.
    pub fn padded(mut genes: Vec<GateSpec>, length: usize) -> Self {
        while genes.len() < length {
            genes.push(GateSpec::identity(0));
        }
        Chromosome { genes }
    }

    pub fn genes(&self) -> &[GateSpec] {
        &self.genes
    }

    pub fn genes_mut(&mut self) -> &mut [GateSpec] {
        &mut self.genes
    }

    pub fn into_genes(self) -> Vec<GateSpec> {
        self.genes
    }

    pub fn len(&self) -> usize {
        self.genes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.genes.is_empty()
    }

    /// Number of non-identity genes. Oracle genes count.
    pub fn count_gates(&self) -> usize {
        self.genes.iter().filter(|g| g.kind != GateKind::Identity).count()
    }

    pub fn count_oracle_gates(&self) -> usize {
        self.genes.iter().filter(|g| g.kind == GateKind::Oracle).count()
    }

    pub fn contains_superposition_gates(&self) -> bool {
        self.genes.iter().any(|g| g.kind.creates_superposition())
    }

    pub fn contains_entanglement_gates(&self) -> bool {
        self.genes.iter().any(|g| g.kind.is_controlled())
    }

    /// Validates every gene, reporting the first failing position.
    pub fn validate(&self, num_qubits: usize) -> Result<(), (usize, GateError)> {
        self.genes
            .iter()
            .enumerate()
            .try_for_each(|(i, g)| g.validate(num_qubits).map_err(|e| (i, e)))
    }

    /// Positions of genes carrying an angle parameter.
    pub fn angle_positions(&self) -> Vec<usize> {
        self.genes
            .iter()
            .enumerate()
            .filter(|(_, g)| g.angle.is_some())
            .map(|(i, _)| i)
            .collect()
    }

    /// One line per non-identity gene: `<position>: <gate>`.
    pub fn diagram(&self) -> String {
        let mut out = String::new();
        for (i, gene) in self.genes.iter().enumerate() {
            if gene.kind != GateKind::Identity {
                out.push_str(&format!("{i:>3}: {gene}\n"));
            }
        }
        out
    }
}

impl From<Vec<GateSpec>> for Chromosome {
    fn from(genes: Vec<GateSpec>) -> Self {
        Chromosome::new(genes)
    }
}

/// The pool of gate kinds that random genes are drawn from.
///
/// Kept as an ordered, duplicate-free list so that sampling is reproducible
/// from a seed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<GateKind>", into = "Vec<GateKind>")]
pub struct GateSet {
    kinds: Vec<GateKind>,
}

impl GateSet {
    pub fn new(kinds: impl IntoIterator<Item = GateKind>) -> Result<Self, GateError> {
        let mut kinds: Vec<GateKind> = kinds.into_iter().collect();
        kinds.sort();
        kinds.dedup();
        if kinds.is_empty() {
            return Err(GateError::EmptyGateSet);
        }
        Ok(GateSet { kinds })
    }

    /// Identity, H, X, Y, Z, RX, RY, RZ, CX, CY, CZ, CH and Oracle.
    pub fn experiment_default() -> Self {
        use GateKind::*;
        GateSet { kinds: vec![Identity, H, X, Y, Z, RX, RY, RZ, CX, CY, CZ, CH, Oracle] }
    }

    pub fn kinds(&self) -> &[GateKind] {
        &self.kinds
    }

    pub fn contains(&self, kind: GateKind) -> bool {
        self.kinds.contains(&kind)
    }

    pub fn has_controlled(&self) -> bool {
        self.kinds.iter().any(|k| k.is_controlled())
    }
}

impl Default for GateSet {
    fn default() -> Self {
        GateSet::experiment_default()
    }
}

impl TryFrom<Vec<GateKind>> for GateSet {
    type Error = GateError;

    fn try_from(kinds: Vec<GateKind>) -> Result<Self, Self::Error> {
        GateSet::new(kinds)
    }
}

impl From<GateSet> for Vec<GateKind> {
    fn from(set: GateSet) -> Self {
        set.kinds
    }
}

/// Draws one gene: kind uniform over the set, qubits uniform over valid
/// distinct assignments, angle uniform on [-pi, pi].
pub fn random_gate<R: Rng + ?Sized>(
    num_qubits: usize,
    gate_set: &GateSet,
    rng: &mut R,
) -> Result<GateSpec, GateError> {
    if gate_set.kinds.is_empty() {
        return Err(GateError::EmptyGateSet);
    }
    if num_qubits == 0 {
        return Err(GateError::QubitOutOfRange { index: 0, num_qubits });
    }
    let kind = gate_set.kinds[rng.random_range(0..gate_set.kinds.len())];
    if kind == GateKind::Oracle {
        return Ok(GateSpec::oracle());
    }
    let (control, target) = if kind.is_controlled() {
        if num_qubits < 2 {
            return Err(GateError::TooFewQubits(kind, num_qubits));
        }
        let control = rng.random_range(0..num_qubits);
        // Uniform over the remaining qubits.
        let mut target = rng.random_range(0..num_qubits - 1);
        if target >= control {
            target += 1;
        }
        (Some(control), target)
    } else {
        (None, rng.random_range(0..num_qubits))
    };
    let angle = kind.is_parameterized().then(|| rng.random_range(-PI..=PI));
    Ok(GateSpec { kind, target, control, angle })
}

/// A chromosome of `length` independently drawn genes.
pub fn random_chromosome<R: Rng + ?Sized>(
    length: usize,
    num_qubits: usize,
    gate_set: &GateSet,
    rng: &mut R,
) -> Result<Chromosome, GateError> {
    (0..length)
        .map(|_| random_gate(num_qubits, gate_set, rng))
        .collect::<Result<Vec<_>, _>>()
        .map(Chromosome::new)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn kind_families() {
        let parameterized: Vec<_> = GateKind::ALL.into_iter().filter(|k| k.is_parameterized()).collect();
        assert_eq!(
            parameterized,
            [GateKind::RX, GateKind::RY, GateKind::RZ, GateKind::CRX, GateKind::CRY, GateKind::CRZ]
        );
        let controlled: Vec<_> = GateKind::ALL.into_iter().filter(|k| k.is_controlled()).collect();
        assert_eq!(
            controlled,
            [
                GateKind::CX,
                GateKind::CY,
                GateKind::CZ,
                GateKind::CH,
                GateKind::CRX,
                GateKind::CRY,
                GateKind::CRZ
            ]
        );
    }

    #[test]
    fn validate_rejects_malformed_genes() {
        assert_eq!(
            GateSpec::h(3).validate(3),
            Err(GateError::QubitOutOfRange { index: 3, num_qubits: 3 })
        );
        assert_eq!(GateSpec::cx(1, 1).validate(3), Err(GateError::ControlIsTarget(GateKind::CX, 1)));
        assert_eq!(
            GateSpec::single(GateKind::CX, 0).validate(3),
            Err(GateError::MissingControl(GateKind::CX))
        );
        assert_eq!(
            GateSpec::single(GateKind::RX, 0).validate(3),
            Err(GateError::MissingAngle(GateKind::RX))
        );
        assert_eq!(
            GateSpec::rotation(GateKind::H, 0, 0.1).validate(3),
            Err(GateError::UnexpectedAngle(GateKind::H))
        );
        assert_eq!(
            GateSpec::rotation(GateKind::RX, 0, 4.0).validate(3),
            Err(GateError::AngleOutOfRange(4.0))
        );
        assert!(GateSpec::rotation(GateKind::RX, 0, PI).validate(1).is_ok());
        assert!(GateSpec::oracle().validate(4).is_ok());
    }

    #[test]
    fn counting() {
        assert_eq!(Chromosome::identity(15).count_gates(), 0);
        let c = Chromosome::new(vec![GateSpec::h(0), GateSpec::identity(0), GateSpec::cx(0, 1)]);
        assert_eq!(c.count_gates(), 2);
        assert_eq!(c.count_oracle_gates(), 0);
        let c = Chromosome::new(vec![GateSpec::oracle(), GateSpec::h(0), GateSpec::oracle()]);
        assert_eq!(c.count_oracle_gates(), 2);
        assert_eq!(c.count_gates(), 3);
    }

    #[test]
    fn structural_detectors() {
        let rot = |k, a| GateSpec::rotation(k, 0, a);
        assert!(Chromosome::new(vec![GateSpec::h(0)]).contains_superposition_gates());
        let xcz = Chromosome::new(vec![GateSpec::x(0), GateSpec::cx(0, 1), GateSpec::z(1)]);
        assert!(!xcz.contains_superposition_gates());
        let cry = Chromosome::new(vec![GateSpec::controlled_rotation(GateKind::CRY, 0, 1, 0.3)]);
        assert!(cry.contains_superposition_gates());
        assert!(Chromosome::new(vec![rot(GateKind::RX, 0.2)]).contains_superposition_gates());
        assert!(!Chromosome::new(vec![rot(GateKind::RZ, 0.2)]).contains_superposition_gates());

        assert!(Chromosome::new(vec![GateSpec::cx(0, 1)]).contains_entanglement_gates());
        let hxry = Chromosome::new(vec![GateSpec::h(0), GateSpec::x(1), rot(GateKind::RY, 1.0)]);
        assert!(!hxry.contains_entanglement_gates());
        let ch = Chromosome::new(vec![GateSpec::controlled(GateKind::CH, 1, 0)]);
        assert!(ch.contains_entanglement_gates());
    }

    #[test]
    fn random_gate_identity_only() {
        let set = GateSet::new([GateKind::Identity]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut seen = [false; 3];
        for _ in 0..300 {
            let g = random_gate(3, &set, &mut rng).unwrap();
            assert_eq!(g.kind, GateKind::Identity);
            seen[g.target] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn random_gate_errors() {
        assert_eq!(GateSet::new([]), Err(GateError::EmptyGateSet));
        let set = GateSet::new([GateKind::CX]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(random_gate(1, &set, &mut rng), Err(GateError::TooFewQubits(GateKind::CX, 1)));
    }

    #[test]
    fn random_cx_assignments_balanced() {
        let set = GateSet::new([GateKind::CX]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let draws = 10_000;
        let mut forward = 0usize;
        for _ in 0..draws {
            let g = random_gate(2, &set, &mut rng).unwrap();
            match (g.control, g.target) {
                (Some(0), 1) => forward += 1,
                (Some(1), 0) => {}
                other => panic!("invalid assignment {other:?}"),
            }
        }
        let freq = forward as f64 / draws as f64;
        assert!((freq - 0.5).abs() <= 0.05, "frequency {freq}");
        // chi-square with one degree of freedom, 0.1% critical value
        let expected = draws as f64 / 2.0;
        let backward = (draws - forward) as f64;
        let chi2 = ((forward as f64 - expected).powi(2) + (backward - expected).powi(2)) / expected;
        assert!(chi2 < 10.83, "chi2 {chi2}");
    }

    #[test]
    fn random_rx_angles_uniform() {
        let set = GateSet::new([GateKind::RX]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut angles: Vec<f64> = (0..10_000)
            .map(|_| random_gate(2, &set, &mut rng).unwrap().angle.unwrap())
            .collect();
        angles.sort_by(f64::total_cmp);
        let n = angles.len() as f64;
        let ks = angles
            .iter()
            .enumerate()
            .map(|(i, &a)| {
                let cdf = (a + PI) / (2.0 * PI);
                (cdf - i as f64 / n).abs().max(((i + 1) as f64 / n - cdf).abs())
            })
            .fold(0.0, f64::max);
        assert!(ks < 0.02, "KS statistic {ks}");
        assert!(angles.iter().all(|a| (-PI..=PI).contains(a)));
    }

    #[test]
    fn diagram_lists_non_identity_genes() {
        let c = Chromosome::new(vec![
            GateSpec::h(0),
            GateSpec::identity(0),
            GateSpec::cx(0, 1),
            GateSpec::oracle(),
        ]);
        assert_eq!(c.diagram(), "  0: H q0\n  2: CX q0 -> q1\n  3: ORACLE [all qubits]\n");
    }

    #[test]
    fn gate_set_serde() {
        let set: GateSet = serde_json::from_str(r#"["H","CX","H"]"#).unwrap();
        assert_eq!(set.kinds(), [GateKind::H, GateKind::CX]);
        assert!(serde_json::from_str::<GateSet>("[]").is_err());
    }
}
