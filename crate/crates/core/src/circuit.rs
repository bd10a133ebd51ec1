//! Circuits of two-qubit gates on the three-qubit register `A, B, C`.
//!
//! Basis state `|abc⟩` has index `4a + 2b + c`. A gate's 4×4 matrix is
//! written in the order of its pair class (`AB`, `AC` or `BC`), first qubit
//! slow. Gates are listed in temporal order, so the circuit unitary is the
//! product with the last gate leftmost.

use std::fmt;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates;
use crate::linalg::{phase_distance, tensor, ComplexMatrix, UNITARY_TOL, ZERO};

/// Dropping threshold for gates that are the identity up to phase.
pub const IDENTITY_DROP_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Qubit {
    A,
    B,
    C,
}

impl Qubit {
    pub const ALL: [Qubit; 3] = [Qubit::A, Qubit::B, Qubit::C];

    /// Bit position inside the 3-qubit index `4a + 2b + c`.
    pub fn shift(self) -> usize {
        match self {
            Qubit::A => 2,
            Qubit::B => 1,
            Qubit::C => 0,
        }
    }

    pub fn bit(self, index: usize) -> usize {
        (index >> self.shift()) & 1
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "A" | "a" => Some(Qubit::A),
            "B" | "b" => Some(Qubit::B),
            "C" | "c" => Some(Qubit::C),
            _ => None,
        }
    }
}

impl fmt::Display for Qubit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Qubit::A => "A",
            Qubit::B => "B",
            Qubit::C => "C",
        };
        f.write_str(s)
    }
}

/// The subsystem a two-qubit gate acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PairClass {
    AB,
    AC,
    BC,
}

impl PairClass {
    pub const ALL: [PairClass; 3] = [PairClass::AB, PairClass::AC, PairClass::BC];

    /// `(slow, fast)` qubits of the gate's 4×4 matrix.
    pub fn qubits(self) -> (Qubit, Qubit) {
        match self {
            PairClass::AB => (Qubit::A, Qubit::B),
            PairClass::AC => (Qubit::A, Qubit::C),
            PairClass::BC => (Qubit::B, Qubit::C),
        }
    }

    /// The qubit left untouched.
    pub fn spectator(self) -> Qubit {
        match self {
            PairClass::AB => Qubit::C,
            PairClass::AC => Qubit::B,
            PairClass::BC => Qubit::A,
        }
    }

    pub fn contains(self, q: Qubit) -> bool {
        let (a, b) = self.qubits();
        a == q || b == q
    }

    pub fn of(p: Qubit, q: Qubit) -> Option<Self> {
        PairClass::ALL.into_iter().find(|pc| pc.qubits() == (p, q) || pc.qubits() == (q, p))
    }

    /// Index of a 3-qubit basis state inside this pair's 4-dim space.
    pub fn local_index(self, index: usize) -> usize {
        let (p, q) = self.qubits();
        2 * p.bit(index) + q.bit(index)
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "AB" => Some(PairClass::AB),
            "AC" => Some(PairClass::AC),
            "BC" => Some(PairClass::BC),
            _ => None,
        }
    }

    /// `u` acting on one qubit of the pair, written as a 4×4 in pair order.
    pub fn local(self, q: Qubit, u: &ComplexMatrix) -> Option<ComplexMatrix> {
        let (p0, p1) = self.qubits();
        let id = ComplexMatrix::identity(2);
        if q == p0 {
            Some(tensor(u, &id))
        } else if q == p1 {
            Some(tensor(&id, u))
        } else {
            None
        }
    }
}

impl fmt::Display for PairClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (p, q) = self.qubits();
        write!(f, "{p}{q}")
    }
}

/// A 4×4 unitary placed on one pair of the register.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitGate {
    pair: PairClass,
    matrix: ComplexMatrix,
    label: Option<String>,
}

impl TwoQubitGate {
    pub fn new(pair: PairClass, matrix: ComplexMatrix, label: Option<String>) -> Result<Self> {
        if matrix.shape() != (4, 4) {
            return Err(Error::dim(
                "4x4",
                format!("{}x{}", matrix.rows(), matrix.cols()),
            ));
        }
        matrix.require_unitary(UNITARY_TOL)?;
        Ok(Self {
            pair,
            matrix,
            label,
        })
    }

    /// Controlled-`u` on `pair`, with `control` one of the pair's qubits.
    pub fn controlled(pair: PairClass, control: Qubit, u: &ComplexMatrix, label: &str) -> Result<Self> {
        let (first, second) = pair.qubits();
        let matrix = if control == first {
            gates::controlled(u, true)
        } else if control == second {
            gates::controlled(u, false)
        } else {
            return Err(Error::UnknownControl(control.to_string(), 2));
        };
        Self::new(pair, matrix, Some(label.to_string()))
    }

    pub fn cnot(control: Qubit, target: Qubit) -> Self {
        let pair = PairClass::of(control, target).expect("control and target must differ");
        Self::controlled(pair, control, &gates::x(), &format!("CNOT({control}->{target})"))
            .expect("CNOT is unitary")
    }

    pub fn pair(&self) -> PairClass {
        self.pair
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn dagger(&self) -> Self {
        Self {
            pair: self.pair,
            matrix: self.matrix.dagger(),
            label: self.label.as_ref().map(|l| format!("{l}^dag")),
        }
    }

    /// The same gate followed by the one-qubit `u` on `q`.
    pub fn then_local(&self, q: Qubit, u: &ComplexMatrix) -> Result<Self> {
        let local = self
            .pair
            .local(q, u)
            .ok_or_else(|| Error::UnknownControl(q.to_string(), 2))?;
        Self::new(self.pair, &local * &self.matrix, self.label.clone())
    }

    /// The one-qubit `u` on `q` followed by this gate.
    pub fn after_local(&self, q: Qubit, u: &ComplexMatrix) -> Result<Self> {
        let local = self
            .pair
            .local(q, u)
            .ok_or_else(|| Error::UnknownControl(q.to_string(), 2))?;
        Self::new(self.pair, &self.matrix * &local, self.label.clone())
    }

    pub fn is_identity_up_to_phase(&self, tol: f64) -> bool {
        phase_distance(&self.matrix, &ComplexMatrix::identity(4)).expect("4x4") < tol
    }
}

/// Embeds a gate into the 8-dim register space.
pub fn embed(g: &TwoQubitGate) -> ComplexMatrix {
    embed_matrix(g.pair(), g.matrix())
}

/// `entry[x, y] = δ(spectator bits) · m[local(x), local(y)]`.
pub fn embed_matrix(pair: PairClass, m: &ComplexMatrix) -> ComplexMatrix {
    let spectator = pair.spectator();
    ComplexMatrix::from_fn(8, 8, |x, y| {
        if spectator.bit(x) != spectator.bit(y) {
            ZERO
        } else {
            m.get(pair.local_index(x), pair.local_index(y))
        }
    })
}

/// Ordered list of pair classes of a circuit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StructureSignature {
    pub pairs: Vec<PairClass>,
}

impl StructureSignature {
    pub fn new(pairs: Vec<PairClass>) -> Self {
        Self { pairs }
    }

    pub fn k(&self) -> usize {
        self.pairs.len()
    }

    pub fn has_adjacent_repeat(&self) -> bool {
        self.pairs.windows(2).any(|w| w[0] == w[1])
    }
}

impl fmt::Display for StructureSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.pairs.iter().map(|p| p.to_string()).collect();
        write!(f, "[{}]", names.join(","))
    }
}

/// Real-parameter count `9k + 3n` of a `k`-gate two-qubit circuit on `n` qubits.
pub fn dof_count(sig: &StructureSignature, n: u32) -> Result<u64> {
    if n < 2 {
        return Err(Error::InvalidQubitCount(n));
    }
    if n == 2 && sig.pairs.iter().any(|&p| p != PairClass::AB) {
        return Err(Error::InvalidQubitCount(n));
    }
    Ok(9 * sig.k() as u64 + 3 * n as u64)
}

/// Temporal sequence of two-qubit gates on `A, B, C`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    gates: Vec<TwoQubitGate>,
}

impl Circuit {
    pub fn new(gates: Vec<TwoQubitGate>) -> Self {
        Self { gates }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn push(&mut self, g: TwoQubitGate) {
        self.gates.push(g);
    }

    pub fn gates(&self) -> &[TwoQubitGate] {
        &self.gates
    }

    pub fn gates_mut(&mut self) -> &mut [TwoQubitGate] {
        &mut self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn signature(&self) -> StructureSignature {
        StructureSignature::new(self.gates.iter().map(|g| g.pair()).collect())
    }

    /// Product of embedded gates, last gate leftmost.
    pub fn unitary(&self) -> ComplexMatrix {
        self.gates
            .iter()
            .fold(ComplexMatrix::identity(8), |acc, g| &embed(g) * &acc)
    }

    /// Inverse circuit: reversed order, each gate daggered.
    pub fn reverse_dagger(&self) -> Self {
        Self::new(self.gates.iter().rev().map(TwoQubitGate::dagger).collect())
    }

    /// Multiplies runs of gates on the same pair and drops gates equal to
    /// the identity up to phase.
    ///
    /// A dropped gate's phase is folded into a neighbouring gate, so the
    /// expansion is preserved exactly unless every gate is dropped.
    pub fn merge_adjacent(&self) -> Self {
        let mut out: Vec<TwoQubitGate> = Vec::with_capacity(self.gates.len());
        let mut pending = Complex64::new(1.0, 0.0);
        for g in &self.gates {
            let mut g = g.clone();
            if pending != Complex64::new(1.0, 0.0) {
                g.matrix = g.matrix.scale(pending);
                pending = Complex64::new(1.0, 0.0);
            }
            let merged = match out.last_mut() {
                Some(top) if top.pair == g.pair => {
                    top.matrix = &g.matrix * &top.matrix;
                    top.label = match (top.label.take(), g.label.clone()) {
                        (Some(a), Some(b)) => Some(format!("{a}+{b}")),
                        (a, b) => a.or(b),
                    };
                    true
                }
                _ => false,
            };
            if !merged {
                out.push(g);
            }
            let top = out.last().expect("just pushed or merged");
            if top.is_identity_up_to_phase(IDENTITY_DROP_TOL) {
                let dropped = out.pop().expect("non-empty");
                let phase = dropped.matrix.trace() / 4.0;
                let phase = phase / phase.norm();
                match out.last_mut() {
                    Some(prev) => prev.matrix = prev.matrix.scale(phase),
                    None => pending *= phase,
                }
            }
        }
        Self::new(out)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&CircuitDoc::from(self)).expect("circuit serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: CircuitDoc = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        doc.into_circuit()
    }

    /// Human-readable QASM-style listing. Export only.
    pub fn to_listing(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "// two-qubit gate listing, {} gate(s)", self.len());
        let _ = writeln!(s, "qreg q[3]; // q[0]=A q[1]=B q[2]=C");
        for (i, g) in self.gates.iter().enumerate() {
            let (p, q) = g.pair.qubits();
            let label = g.label().unwrap_or("U");
            let _ = writeln!(
                s,
                "u4 m{i} q[{}],q[{}]; // {} {}",
                qubit_slot(p),
                qubit_slot(q),
                g.pair,
                label
            );
        }
        for (i, g) in self.gates.iter().enumerate() {
            let _ = writeln!(s, "// m{i} =");
            for r in 0..4 {
                let row: Vec<String> = (0..4)
                    .map(|c| {
                        let z = g.matrix.get(r, c);
                        format!("{:+.12}{:+.12}i", z.re, z.im)
                    })
                    .collect();
                let _ = writeln!(s, "//   {}", row.join("  "));
            }
        }
        s
    }
}

fn qubit_slot(q: Qubit) -> usize {
    match q {
        Qubit::A => 0,
        Qubit::B => 1,
        Qubit::C => 2,
    }
}

/// Expansion of a circuit into one 8×8 unitary.
pub fn circuit_unitary(c: &Circuit) -> ComplexMatrix {
    c.unitary()
}

pub fn merge_adjacent(c: &Circuit) -> Circuit {
    c.merge_adjacent()
}

pub fn serialize(c: &Circuit) -> String {
    c.to_json()
}

pub fn parse(text: &str) -> Result<Circuit> {
    Circuit::from_json(text)
}

type MatrixDoc = [[[f64; 2]; 4]; 4];

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GateDoc {
    pair: PairClass,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    matrix: MatrixDoc,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CircuitDoc {
    qubits: Vec<String>,
    gates: Vec<GateDoc>,
}

impl From<&Circuit> for CircuitDoc {
    fn from(c: &Circuit) -> Self {
        let gates = c
            .gates
            .iter()
            .map(|g| {
                let mut matrix = [[[0.0; 2]; 4]; 4];
                for (r, row) in matrix.iter_mut().enumerate() {
                    for (col, cell) in row.iter_mut().enumerate() {
                        let z = g.matrix.get(r, col);
                        *cell = [z.re, z.im];
                    }
                }
                GateDoc {
                    pair: g.pair,
                    label: g.label.clone(),
                    matrix,
                }
            })
            .collect();
        CircuitDoc {
            qubits: vec!["A".into(), "B".into(), "C".into()],
            gates,
        }
    }
}

impl CircuitDoc {
    fn into_circuit(self) -> Result<Circuit> {
        if self.qubits != ["A", "B", "C"] {
            return Err(Error::Parse {
                line: 1,
                column: 1,
                message: format!("expected qubits [\"A\",\"B\",\"C\"], found {:?}", self.qubits),
            });
        }
        let gates = self
            .gates
            .into_iter()
            .enumerate()
            .map(|(index, g)| {
                let entries = g
                    .matrix
                    .iter()
                    .flat_map(|row| row.iter().map(|&[re, im]| Complex64::new(re, im)))
                    .collect();
                let matrix = ComplexMatrix::new(4, 4, entries).map_err(|e| Error::InvalidGate {
                    index,
                    reason: e.to_string(),
                })?;
                TwoQubitGate::new(g.pair, matrix, g.label).map_err(|e| Error::InvalidGate {
                    index,
                    reason: e.to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Circuit::new(gates))
    }
}

/// Reads a bare matrix document `[[[re, im], ...], ...]`.
pub fn matrix_from_json(text: &str) -> Result<ComplexMatrix> {
    let rows: Vec<Vec<[f64; 2]>> = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let entries: Vec<Vec<Complex64>> = rows
        .iter()
        .map(|row| row.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
        .collect();
    ComplexMatrix::from_rows(&entries)
}

pub fn matrix_to_json(m: &ComplexMatrix) -> serde_json::Value {
    let rows: Vec<Vec<[f64; 2]>> = (0..m.rows())
        .map(|r| {
            (0..m.cols())
                .map(|c| {
                    let z = m.get(r, c);
                    [z.re, z.im]
                })
                .collect()
        })
        .collect();
    serde_json::to_value(rows).expect("finite matrix serializes")
}
