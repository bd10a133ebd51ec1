//! Structural tests on two- and three-qubit unitaries: controlled-gate
//! detection, product states in two-dimensional subspaces, tensor factors of
//! controlled pairs and local spectra.

use num_complex::Complex64;
use serde::Serialize;

use crate::circuit::{embed, PairClass, Qubit, TwoQubitGate};
use crate::error::{Error, Result};
use crate::linalg::{
    eig_unitary, nearest_product_factorization, split_determinant, wrap_phase, ComplexMatrix,
    CLUSTER_TOL, EQUALITY_TOL, RANK_ONE_TOL, UNITARY_TOL, ZERO,
};

pub use crate::kak::{kak_decompose, kak_reconstruct, KakDecomposition};

/// `|0⟩⟨0| ⊗ block0 + |1⟩⟨1| ⊗ block1` with the control as the slow index.
///
/// The remaining qubits keep their register order (`A` before `B` before `C`).
#[derive(Debug, Clone)]
pub struct ControlledForm {
    pub control: Qubit,
    pub block0: ComplexMatrix,
    pub block1: ComplexMatrix,
}

/// Qubits of an `n`-qubit register (`n` = 2 or 3), slow first.
fn register(n: usize) -> &'static [Qubit] {
    if n == 3 {
        &Qubit::ALL
    } else {
        &Qubit::ALL[..2]
    }
}

/// Register index of (control bit, rest index) with the rest in register order.
fn reordered_index(qubits: &[Qubit], control: Qubit, bit: usize, rest: usize) -> usize {
    let others: Vec<usize> = (0..qubits.len()).filter(|&p| qubits[p] != control).collect();
    let n = qubits.len();
    let pos = |p: usize| n - 1 - p;
    let cpos = qubits.iter().position(|&q| q == control).expect("control in register");
    let mut index = bit << pos(cpos);
    for (k, &p) in others.iter().enumerate() {
        let b = (rest >> (others.len() - 1 - k)) & 1;
        index |= b << pos(p);
    }
    index
}

/// Returns the two blocks if `u` acts as a gate controlled on `control` in
/// the computational basis.
pub fn detect_controlled(u: &ComplexMatrix, control: Qubit) -> Result<Option<ControlledForm>> {
    let n = match u.shape() {
        (8, 8) => 3,
        (4, 4) => 2,
        (r, c) => return Err(Error::dim("8x8 or 4x4", format!("{r}x{c}"))),
    };
    let qubits = register(n);
    if !qubits.contains(&control) {
        return Err(Error::UnknownControl(control.to_string(), n));
    }
    u.require_unitary(UNITARY_TOL)?;

    let half = 1 << (n - 1);
    let block = |s: usize, t: usize| {
        ComplexMatrix::from_fn(half, half, |i, j| {
            u.get(reordered_index(qubits, control, s, i), reordered_index(qubits, control, t, j))
        })
    };
    if block(0, 1).frobenius_norm() >= EQUALITY_TOL || block(1, 0).frobenius_norm() >= EQUALITY_TOL {
        return Ok(None);
    }
    Ok(Some(ControlledForm {
        control,
        block0: block(0, 0),
        block1: block(1, 1),
    }))
}

/// A product state `a·ψ₁ + b·ψ₂` found inside a two-dimensional span.
#[derive(Debug, Clone, Serialize)]
pub struct ProductWitness {
    pub coeffs: (Complex64, Complex64),
    pub state: [Complex64; 4],
    pub factors: ([Complex64; 2], [Complex64; 2]),
}

fn det2(v: &[Complex64]) -> Complex64 {
    v[0] * v[3] - v[1] * v[2]
}

/// Roots `(a, b)` of `d11 a² + d12 ab + d22 b² = 0`, or `None` if the form vanishes.
fn quadratic_roots(d11: Complex64, d12: Complex64, d22: Complex64) -> Option<Vec<(Complex64, Complex64)>> {
    let one = Complex64::new(1.0, 0.0);
    let scale = d11.norm().max(d12.norm()).max(d22.norm());
    if scale < 1e-12 {
        return None;
    }
    let tiny = 1e-12 * scale;
    if d11.norm() < tiny && d22.norm() < tiny {
        return Some(vec![(one, ZERO), (ZERO, one)]);
    }
    // Solve in the variable with the larger leading coefficient, stably.
    let (lead, mid, tail, swap) = if d11.norm() >= d22.norm() {
        (d11, d12, d22, false)
    } else {
        (d22, d12, d11, true)
    };
    let disc = (mid * mid - lead * tail * 4.0).sqrt();
    let q1 = -(mid + disc) / 2.0;
    let q2 = -(mid - disc) / 2.0;
    let q = if q1.norm() >= q2.norm() { q1 } else { q2 };
    let roots = if q.norm() < tiny {
        vec![ZERO, ZERO]
    } else {
        vec![q / lead, tail / q]
    };
    Some(
        roots
            .into_iter()
            .map(|x| if swap { (one, x) } else { (x, one) })
            .collect(),
    )
}

/// Finds a normalized product state in `span{ψ₁, ψ₂}`.
///
/// A two-qubit state is a product iff its 2×2 reshape is singular, which is
/// a homogeneous quadratic in `(a, b)`. Between two distinct roots the one
/// with larger `|a|` wins, then the larger `Re b` (with `a` made real and
/// non-negative).
pub fn product_state_in_span(psi1: &[Complex64], psi2: &[Complex64]) -> Result<ProductWitness> {
    if psi1.len() != 4 || psi2.len() != 4 {
        return Err(Error::dim("two length-4 vectors", format!("lengths {} and {}", psi1.len(), psi2.len())));
    }
    if psi1.iter().chain(psi2).any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    let n1: f64 = psi1.iter().map(|z| z.norm_sqr()).sum();
    let n2: f64 = psi2.iter().map(|z| z.norm_sqr()).sum();
    let overlap: Complex64 = psi1.iter().zip(psi2).map(|(x, y)| x.conj() * y).sum();
    if n1 == 0.0 || n2 == 0.0 || 1.0 - overlap.norm_sqr() / (n1 * n2) < 1e-12 {
        return Err(Error::LinearlyDependent);
    }

    let d11 = det2(psi1);
    let d22 = det2(psi2);
    let d12 = psi1[0] * psi2[3] + psi2[0] * psi1[3] - psi1[1] * psi2[2] - psi2[1] * psi1[2];
    let one = Complex64::new(1.0, 0.0);
    let candidates = quadratic_roots(d11, d12, d22).unwrap_or_else(|| vec![(one, ZERO)]);

    let normalized: Vec<(Complex64, Complex64, [Complex64; 4])> = candidates
        .into_iter()
        .map(|(a, b)| {
            let mut state = [ZERO; 4];
            for (k, s) in state.iter_mut().enumerate() {
                *s = a * psi1[k] + b * psi2[k];
            }
            let norm = state.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            // Fix the free phase: a real non-negative, or b if a vanishes.
            let pivot = if a.norm() > 1e-12 { a } else { b };
            let phase = pivot.conj() / pivot.norm();
            let f = phase / norm;
            (a * f, b * f, state.map(|z| z * f))
        })
        .collect();
    let best = normalized
        .iter()
        .max_by(|x, y| {
            let (ax, ay) = (x.0.norm(), y.0.norm());
            if (ax - ay).abs() > 1e-9 {
                ax.total_cmp(&ay)
            } else {
                x.1.re.total_cmp(&y.1.re)
            }
        })
        .expect("at least one root");
    let (a, b, state) = *best;

    // Split the rank-one reshape [[s0, s1], [s2, s3]] along its heavier row.
    let rows = [[state[0], state[1]], [state[2], state[3]]];
    let row_norm = |r: &[Complex64; 2]| (r[0].norm_sqr() + r[1].norm_sqr()).sqrt();
    let heavy = if row_norm(&rows[0]) >= row_norm(&rows[1]) { 0 } else { 1 };
    let rn = row_norm(&rows[heavy]);
    let second = [rows[heavy][0] / rn, rows[heavy][1] / rn];
    let first = [0, 1].map(|i| rows[i][0] * second[0].conj() + rows[i][1] * second[1].conj());

    Ok(ProductWitness {
        coeffs: (a, b),
        state,
        factors: (first, second),
    })
}

/// Local factors of a product `U_AB · U_AC` that is controlled on `A`:
/// `|0⟩⟨0| ⊗ v_b1 ⊗ w_c1 + |1⟩⟨1| ⊗ v_b2 ⊗ w_c2`.
#[derive(Debug, Clone)]
pub struct ControlledPairFactors {
    pub v_b1: ComplexMatrix,
    pub v_b2: ComplexMatrix,
    pub w_c1: ComplexMatrix,
    pub w_c2: ComplexMatrix,
}

/// Splits a product block `v ⊗ w` with `det v = 1`; `None` when not a product.
fn split_block(block: &ComplexMatrix) -> Result<Option<(ComplexMatrix, ComplexMatrix)>> {
    let f = nearest_product_factorization(block)?;
    if f.residual >= RANK_ONE_TOL {
        return Ok(None);
    }
    let (v, root) = split_determinant(&f.a);
    Ok(Some((v, f.b.scale(root))))
}

pub fn factor_controlled_pair(u_ab: &TwoQubitGate, u_ac: &TwoQubitGate) -> Result<Option<ControlledPairFactors>> {
    if u_ab.pair() != PairClass::AB || u_ac.pair() != PairClass::AC {
        return Err(Error::WrongPairs {
            expected: "AB, AC".into(),
            found: format!("{}, {}", u_ab.pair(), u_ac.pair()),
        });
    }
    let product = &embed(u_ab) * &embed(u_ac);
    let Some(form) = detect_controlled(&product, Qubit::A)? else {
        return Ok(None);
    };
    let (Some((v_b1, w_c1)), Some((v_b2, w_c2))) = (split_block(&form.block0)?, split_block(&form.block1)?) else {
        return Ok(None);
    };
    Ok(Some(ControlledPairFactors { v_b1, v_b2, w_c1, w_c2 }))
}

/// Outcome of [`has_local_spectrum`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LocalSpectrum {
    pub matched: bool,
    /// `(φ₁, φ₂)` in `[0, 2π)` when matched.
    pub phases: Option<(f64, f64)>,
}

/// Whether the spectrum of `r` is `{e^{iφ₁}, e^{iφ₂}}` with each value twice,
/// the spectrum of `w ⊗ I` for a one-qubit `w`.
pub fn has_local_spectrum(r: &ComplexMatrix) -> Result<LocalSpectrum> {
    if r.shape() != (4, 4) {
        return Err(Error::dim("4x4", format!("{}x{}", r.rows(), r.cols())));
    }
    let eig = eig_unitary(r)?;
    let l = &eig.eigenvalues;
    for [(i, j), (k, m)] in [[(0, 1), (2, 3)], [(0, 2), (1, 3)], [(0, 3), (1, 2)]] {
        if (l[i] - l[j]).norm() < CLUSTER_TOL && (l[k] - l[m]).norm() < CLUSTER_TOL {
            return Ok(LocalSpectrum {
                matched: true,
                phases: Some((wrap_phase(l[i].arg()), wrap_phase(l[k].arg()))),
            });
        }
    }
    Ok(LocalSpectrum {
        matched: false,
        phases: None,
    })
}
