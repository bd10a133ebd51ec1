//! Standard one-, two- and three-qubit matrices.
//!
//! Multi-qubit matrices use the register order of their arguments with the
//! first qubit as the slow index; three-qubit matrices index `|abc⟩` as
//! `4a + 2b + c`.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::linalg::{cis, tensor, ComplexMatrix, I, ONE, ZERO};

pub fn identity2() -> ComplexMatrix {
    ComplexMatrix::identity(2)
}

pub fn x() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap()
}

pub fn y() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[[ZERO, -I], [I, ZERO]]).unwrap()
}

pub fn z() -> ComplexMatrix {
    ComplexMatrix::diag(&[ONE, -ONE])
}

pub fn h() -> ComplexMatrix {
    let s = FRAC_1_SQRT_2;
    ComplexMatrix::from_real_rows(&[[s, s], [s, -s]]).unwrap()
}

/// `|0⟩⟨0| ⊗ I + |1⟩⟨1| ⊗ u` when `control_first`, else `I ⊗ |0⟩⟨0| + u ⊗ |1⟩⟨1|`.
pub fn controlled(u: &ComplexMatrix, control_first: bool) -> ComplexMatrix {
    let p0 = ComplexMatrix::diag(&[ONE, ZERO]);
    let p1 = ComplexMatrix::diag(&[ZERO, ONE]);
    let id = identity2();
    if control_first {
        tensor(&p0, &id).add(&tensor(&p1, u))
    } else {
        tensor(&id, &p0).add(&tensor(u, &p1))
    }
}

/// Like [`controlled`] but applies `u` when the control is `|0⟩`.
pub fn anti_controlled(u: &ComplexMatrix, control_first: bool) -> ComplexMatrix {
    let p0 = ComplexMatrix::diag(&[ONE, ZERO]);
    let p1 = ComplexMatrix::diag(&[ZERO, ONE]);
    let id = identity2();
    if control_first {
        tensor(&p0, u).add(&tensor(&p1, &id))
    } else {
        tensor(u, &p0).add(&tensor(&id, &p1))
    }
}

/// CNOT with the first qubit as control.
pub fn cnot() -> ComplexMatrix {
    controlled(&x(), true)
}

pub fn cz() -> ComplexMatrix {
    ComplexMatrix::diag(&[ONE, ONE, ONE, -ONE])
}

pub fn swap() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ])
    .unwrap()
}

/// Controlled phase `diag(1, 1, 1, e^{iθ})`.
pub fn w(theta: f64) -> ComplexMatrix {
    ComplexMatrix::diag(&[ONE, ONE, ONE, cis(theta)])
}

/// `diag(1, 1, e^{iθ₁}, e^{iθ₂})`, the `|1⟩` block of the doubly controlled diagonal.
pub fn r(theta1: f64, theta2: f64) -> ComplexMatrix {
    ComplexMatrix::diag(&[ONE, ONE, cis(theta1), cis(theta2)])
}

/// Doubly controlled `diag(e^{iθ₁}, e^{iθ₂})`: identity except entries 6 and 7.
pub fn ccu_diag(theta1: f64, theta2: f64) -> ComplexMatrix {
    let mut d = [ONE; 8];
    d[6] = cis(theta1);
    d[7] = cis(theta2);
    ComplexMatrix::diag(&d)
}

/// Doubly controlled `u` with controls A, B and target C.
pub fn ccu(u: &ComplexMatrix) -> ComplexMatrix {
    assert_eq!(u.shape(), (2, 2), "ccu expects a one-qubit unitary");
    ComplexMatrix::from_fn(8, 8, |r, c| {
        if r < 6 || c < 6 {
            if r == c {
                ONE
            } else {
                ZERO
            }
        } else {
            u.get(r - 6, c - 6)
        }
    })
}

pub fn toffoli() -> ComplexMatrix {
    ccu(&x())
}

/// Controlled swap with control A; exchanges basis states 5 and 6.
pub fn fredkin() -> ComplexMatrix {
    let perm = [0usize, 1, 2, 3, 4, 6, 5, 7];
    ComplexMatrix::from_fn(8, 8, |r, c| if perm[r] == c { ONE } else { ZERO })
}

/// `√X` on the principal branch: `½[[1+i, 1−i], [1−i, 1+i]]`.
pub fn sqrt_x() -> ComplexMatrix {
    let a = Complex64::new(0.5, 0.5);
    let b = Complex64::new(0.5, -0.5);
    ComplexMatrix::from_rows(&[[a, b], [b, a]]).unwrap()
}
