//! Constructive side: the gate-count lower bound, classification of doubly
//! controlled one-qubit gates, their one-, four- and five-gate circuits, the
//! five-gate controlled swap, and a small catalog of target matrices.

use std::f64::consts::PI;

use serde::Serialize;

use crate::circuit::{matrix_to_json, Circuit, PairClass, Qubit, TwoQubitGate};
use crate::error::{Error, Result};
use crate::gates;
use crate::linalg::{cis, eig_unitary, wrap_phase, ComplexMatrix, EQUALITY_TOL, ONE, UNITARY_TOL};

/// `⌈(4ⁿ − 3n − 1) / 9⌉`, the generic two-qubit gate count lower bound.
pub fn lower_bound(n: u32) -> Result<u128> {
    if n < 2 {
        return Err(Error::InvalidQubitCount(n));
    }
    let pow = 4u128.checked_pow(n).ok_or(Error::InvalidQubitCount(n))?;
    let numerator = pow - 3 * n as u128 - 1;
    Ok(numerator.div_ceil(9))
}

/// Why the assigned gate count is minimal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Optimality {
    /// Zero or one gate.
    Trivial,
    /// Unit determinant: four gates are necessary and the four-gate circuit exists.
    FourGateLowerBound,
    /// Otherwise five gates are necessary and the five-gate circuit exists.
    FiveGateLowerBound,
}

/// Eigenphase classification of a one-qubit `u` for the doubly controlled `u`.
#[derive(Debug, Clone)]
pub struct CcuClass {
    /// Eigenphases in `[0, 2π)`, ascending.
    pub theta1: f64,
    pub theta2: f64,
    /// `θ₁ + θ₂` in `[0, 2π)`.
    pub det_phase: f64,
    pub count: usize,
    /// `u = P · diag(e^{iθ₁}, e^{iθ₂}) · P†`.
    pub basis_change: ComplexMatrix,
    pub optimality: Optimality,
}

impl CcuClass {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "theta1": self.theta1,
            "theta2": self.theta2,
            "det_phase": self.det_phase,
            "count": self.count,
            "basis_change": matrix_to_json(&self.basis_change),
            "optimality": self.optimality,
        })
    }
}

fn require_one_qubit_unitary(u: &ComplexMatrix) -> Result<()> {
    if u.shape() != (2, 2) {
        return Err(Error::dim("2x2", format!("{}x{}", u.rows(), u.cols())));
    }
    u.require_unitary(UNITARY_TOL)
}

pub fn classify_ccu(u: &ComplexMatrix) -> Result<CcuClass> {
    require_one_qubit_unitary(u)?;
    let eig = eig_unitary(u)?;
    let phases = eig.phases();
    let (theta1, theta2) = (phases[0], phases[1]);
    let (e1, e2) = (cis(theta1), cis(theta2));

    let (count, optimality) = if (e1 - ONE).norm() < EQUALITY_TOL && (e2 - ONE).norm() < EQUALITY_TOL {
        (0, Optimality::Trivial)
    } else if (e1 - e2).norm() < EQUALITY_TOL {
        (1, Optimality::Trivial)
    } else if (e1 * e2 - ONE).norm() < EQUALITY_TOL {
        (4, Optimality::FourGateLowerBound)
    } else {
        (5, Optimality::FiveGateLowerBound)
    };
    Ok(CcuClass {
        theta1,
        theta2,
        det_phase: wrap_phase(theta1 + theta2),
        count,
        basis_change: eig.vectors,
        optimality,
    })
}

/// Principal square root: each eigenphase in `[0, 2π)` is halved.
pub fn sqrt_unitary(u: &ComplexMatrix) -> Result<ComplexMatrix> {
    require_one_qubit_unitary(u)?;
    let eig = eig_unitary(u)?;
    let half: Vec<f64> = eig.phases().iter().map(|p| p / 2.0).collect();
    let d = ComplexMatrix::diag_phases(&half);
    Ok(&(&eig.vectors * &d) * &eig.vectors.dagger())
}

fn controlled_gate(control: Qubit, target: Qubit, u: &ComplexMatrix, label: &str) -> TwoQubitGate {
    let pair = PairClass::of(control, target).expect("distinct qubits");
    TwoQubitGate::controlled(pair, control, u, label).expect("controlled unitary is unitary")
}

/// Five-gate circuit for the doubly controlled `u` (controls A, B; target C):
/// `CW(B→C), CNOT(A→B), CW†(B→C), CNOT(A→B), CW(A→C)` with `W² = u`.
pub fn synth_ccu_five(u: &ComplexMatrix) -> Result<Circuit> {
    let w = sqrt_unitary(u)?;
    let cw_bc = controlled_gate(Qubit::B, Qubit::C, &w, "CW(B->C)");
    Ok(Circuit::new(vec![
        cw_bc.clone(),
        TwoQubitGate::cnot(Qubit::A, Qubit::B),
        cw_bc.dagger(),
        TwoQubitGate::cnot(Qubit::A, Qubit::B),
        controlled_gate(Qubit::A, Qubit::C, &w, "CW(A->C)"),
    ]))
}

/// Four-gate circuit for the doubly controlled `diag(e^{−iθ}, e^{iθ})`:
/// `U_BC†, CW(A→C), U_BC, CW(A→C)` with `W = diag(e^{−iθ/2}, e^{iθ/2})` and
/// `U_BC = |0⟩⟨0|_B ⊗ X_C + |1⟩⟨1|_B ⊗ I_C`.
pub fn synth_ccu_four(theta: f64) -> Circuit {
    let w = ComplexMatrix::diag_phases(&[-theta / 2.0, theta / 2.0]);
    let u_bc = TwoQubitGate::new(PairClass::BC, gates::anti_controlled(&gates::x(), true), Some("U_BC".into()))
        .expect("permutation is unitary");
    let cw = controlled_gate(Qubit::A, Qubit::C, &w, "CW(A->C)");
    Circuit::new(vec![u_bc.dagger(), cw.clone(), u_bc, cw])
}

/// One AB gate `W(θ) = diag(1, 1, 1, e^{iθ})`, which equals the doubly
/// controlled `e^{iθ} I`.
pub fn synth_ccu_one(theta: f64) -> Circuit {
    let g = TwoQubitGate::new(PairClass::AB, gates::w(theta), Some(format!("W({theta})"))).expect("diagonal phase");
    Circuit::new(vec![g])
}

/// Minimal circuit for the doubly controlled `u`, dispatched on [`classify_ccu`].
pub fn synth_ccu(u: &ComplexMatrix) -> Result<Circuit> {
    let class = classify_ccu(u)?;
    match class.count {
        0 => Ok(Circuit::empty()),
        1 => Ok(synth_ccu_one((class.theta1 + class.theta2) / 2.0)),
        4 => {
            // Balance the residual determinant phase across both eigenphases.
            let delta = wrap_to_pi(class.theta1 + class.theta2) / 2.0;
            let circuit = synth_ccu_four(class.theta2 - delta);
            let p = &class.basis_change;
            let mut gates = circuit.gates().to_vec();
            let last = gates.len() - 1;
            gates[0] = gates[0].after_local(Qubit::C, &p.dagger())?;
            gates[last] = gates[last].then_local(Qubit::C, p)?;
            Ok(Circuit::new(gates))
        }
        _ => synth_ccu_five(u),
    }
}

fn wrap_to_pi(phi: f64) -> f64 {
    let w = wrap_phase(phi);
    if w > PI {
        w - 2.0 * PI
    } else {
        w
    }
}

/// Five-gate controlled swap (control A): the seven-gate sequence
/// `CNOT(C→B), CV(B→C), CV(A→C), CNOT(A→B), CV†(B→C), CNOT(C→B), CNOT(A→B)`
/// with `V² = X`, merged on adjacent equal pairs.
pub fn synth_fredkin_unmerged() -> Circuit {
    let v = gates::sqrt_x();
    let cv_bc = controlled_gate(Qubit::B, Qubit::C, &v, "CV(B->C)");
    Circuit::new(vec![
        TwoQubitGate::cnot(Qubit::C, Qubit::B),
        cv_bc.clone(),
        controlled_gate(Qubit::A, Qubit::C, &v, "CV(A->C)"),
        TwoQubitGate::cnot(Qubit::A, Qubit::B),
        cv_bc.dagger(),
        TwoQubitGate::cnot(Qubit::C, Qubit::B),
        TwoQubitGate::cnot(Qubit::A, Qubit::B),
    ])
}

pub fn synth_fredkin() -> Circuit {
    synth_fredkin_unmerged().merge_adjacent()
}

/// A named target matrix.
#[derive(Debug, Clone)]
pub struct GateCatalogEntry {
    pub name: String,
    pub unitary: ComplexMatrix,
}

/// Catalog names with their parameter counts.
pub const CATALOG: [(&str, usize); 6] = [
    ("fredkin", 0),
    ("toffoli", 0),
    ("ccu-diag", 2),
    ("w", 1),
    ("r", 2),
    ("swap", 0),
];

/// Builds a named target. `w`, `r` and `swap` are two-qubit (4×4); the rest
/// act on the full register.
pub fn make_target(name: &str, params: &[f64]) -> Result<GateCatalogEntry> {
    let expected = CATALOG
        .iter()
        .find(|(n, _)| *n == name)
        .map(|&(_, k)| k)
        .ok_or_else(|| Error::UnknownTarget(name.to_string()))?;
    if params.len() != expected {
        return Err(Error::MissingParams {
            name: name.to_string(),
            expected,
            found: params.len(),
        });
    }
    let unitary = match name {
        "fredkin" => gates::fredkin(),
        "toffoli" => gates::toffoli(),
        "ccu-diag" => gates::ccu_diag(params[0], params[1]),
        "w" => gates::w(params[0]),
        "r" => gates::r(params[0], params[1]),
        _ => gates::swap(),
    };
    Ok(GateCatalogEntry {
        name: name.to_string(),
        unitary,
    })
}

/// `|0⟩⟨0| ⊗ I + |1⟩⟨1| ⊗ u` on the register, controls A and B, target C.
pub fn ccu_target(u: &ComplexMatrix) -> Result<ComplexMatrix> {
    require_one_qubit_unitary(u)?;
    Ok(gates::ccu(u))
}
