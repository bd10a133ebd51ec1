//! Canonical (KAK) decomposition of two-qubit unitaries.
//!
//! Every `U ∈ U(4)` factors as
//! `e^{iφ} (u_a ⊗ u_b) · exp[i(α_x XX + α_y YY + α_z ZZ)] · (v_a ⊗ v_b)`
//! with unit-determinant one-qubit factors. The route here goes through the
//! magic basis, where local gates become real orthogonal and the interaction
//! term becomes diagonal, then folds the interaction coefficients into the
//! Weyl chamber `π/4 ≥ α_x ≥ α_y ≥ |α_z|` by local moves.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};

use nalgebra::{Matrix4, SymmetricEigen};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gates;
use crate::linalg::{
    cis, nearest_product_factorization, split_determinant, tensor, ComplexMatrix, I, ONE,
    UNITARY_TOL, ZERO,
};

#[derive(Debug, Clone)]
pub struct KakDecomposition {
    pub u_a: ComplexMatrix,
    pub u_b: ComplexMatrix,
    pub v_a: ComplexMatrix,
    pub v_b: ComplexMatrix,
    /// `(α_x, α_y, α_z)` in radians.
    pub alpha: [f64; 3],
    pub global_phase: f64,
}

impl KakDecomposition {
    pub fn reconstruct(&self) -> ComplexMatrix {
        kak_reconstruct(self)
    }

    pub fn in_weyl_chamber(&self, tol: f64) -> bool {
        let [ax, ay, az] = self.alpha;
        FRAC_PI_4 + tol >= ax && ax + tol >= ay && ay + tol >= az.abs()
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Doc {
            alpha: [f64; 3],
            global_phase: f64,
            u_a: serde_json::Value,
            u_b: serde_json::Value,
            v_a: serde_json::Value,
            v_b: serde_json::Value,
        }
        serde_json::to_value(Doc {
            alpha: self.alpha,
            global_phase: self.global_phase,
            u_a: crate::circuit::matrix_to_json(&self.u_a),
            u_b: crate::circuit::matrix_to_json(&self.u_b),
            v_a: crate::circuit::matrix_to_json(&self.v_a),
            v_b: crate::circuit::matrix_to_json(&self.v_b),
        })
        .expect("decomposition serializes")
    }
}

/// `exp[i(α_x XX + α_y YY + α_z ZZ)]`, using that the three terms commute and
/// square to the identity.
pub fn interaction(alpha: [f64; 3]) -> ComplexMatrix {
    let paulis = [gates::x(), gates::y(), gates::z()];
    let id = ComplexMatrix::identity(4);
    paulis
        .iter()
        .zip(alpha)
        .fold(id.clone(), |acc, (p, a)| {
            let pp = tensor(p, p);
            let factor = id.scale(Complex64::new(a.cos(), 0.0)).add(&pp.scale(I * a.sin()));
            &acc * &factor
        })
}

pub fn kak_reconstruct(k: &KakDecomposition) -> ComplexMatrix {
    let left = tensor(&k.u_a, &k.u_b);
    let right = tensor(&k.v_a, &k.v_b);
    (&(&left * &interaction(k.alpha)) * &right).scale(cis(k.global_phase))
}

/// Columns are the magic (phased Bell) basis.
fn magic_basis() -> ComplexMatrix {
    let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let si = I * FRAC_1_SQRT_2;
    ComplexMatrix::from_rows(&[
        [s, ZERO, ZERO, si],
        [ZERO, si, s, ZERO],
        [ZERO, si, -s, ZERO],
        [s, ZERO, ZERO, -si],
    ])
    .expect("static basis")
}

/// One-qubit local frame tracked while normalizing the interaction angles.
struct LocalFrame {
    left: [ComplexMatrix; 2],
    right: [ComplexMatrix; 2],
}

impl LocalFrame {
    fn new() -> Self {
        let id = ComplexMatrix::identity(2);
        Self {
            left: [id.clone(), id.clone()],
            right: [id.clone(), id],
        }
    }

    /// `U_d(α) = U_d(α − nπ/2 e_k) · (P_k ⊗ P_k)^n` up to phase.
    fn shift(&mut self, alpha: &mut [f64; 3], k: usize, n: i64) {
        if n == 0 {
            return;
        }
        alpha[k] -= n as f64 * FRAC_PI_2;
        if n.rem_euclid(2) == 1 {
            let p = pauli(k);
            for side in &mut self.right {
                *side = &p * side;
            }
        }
    }

    /// Conjugation by `P_k ⊗ I` negates the two coefficients other than `k`.
    fn flip_others(&mut self, alpha: &mut [f64; 3], k: usize) {
        for (j, a) in alpha.iter_mut().enumerate() {
            if j != k {
                *a = -*a;
            }
        }
        let p = pauli(k);
        self.left[0] = &self.left[0] * &p;
        self.right[0] = &p * &self.right[0];
    }

    /// `U_d(α) = (V⊗V)† U_d(α with j,k swapped) (V⊗V)`.
    fn swap(&mut self, alpha: &mut [f64; 3], j: usize, k: usize) {
        alpha.swap(j, k);
        let v = swapper(j, k);
        let vd = v.dagger();
        for side in &mut self.left {
            *side = &*side * &vd;
        }
        for side in &mut self.right {
            *side = &v * side;
        }
    }
}

fn pauli(k: usize) -> ComplexMatrix {
    match k {
        0 => gates::x(),
        1 => gates::y(),
        _ => gates::z(),
    }
}

/// A one-qubit Clifford whose conjugation exchanges Pauli `j` and `k` up to sign.
fn swapper(j: usize, k: usize) -> ComplexMatrix {
    match (j.min(k), j.max(k)) {
        (0, 1) => ComplexMatrix::diag(&[ONE, I]),
        (0, 2) => gates::h(),
        _ => {
            let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
            let t = -I * FRAC_1_SQRT_2;
            ComplexMatrix::from_rows(&[[s, t], [t, s]]).expect("static matrix")
        }
    }
}

/// Real orthogonal `P` (det +1) diagonalizing the complex symmetric unitary `m`.
///
/// Real and imaginary parts of `m` commute, so a generic real combination of
/// them shares its eigenvectors. Combinations are retried until the
/// off-diagonal residual of `Pᵀ m P` is negligible.
fn real_orthogonal_diagonalizer(m: &ComplexMatrix) -> (Matrix4<f64>, [Complex64; 4]) {
    const COEFFS: [f64; 8] = [1.1071487, 0.5772157, -2.3025851, 0.3183099, 4.6692016, -0.7071068, 1.6180340, -3.1415927];
    let re = Matrix4::from_fn(|r, c| m.get(r, c).re);
    let im = Matrix4::from_fn(|r, c| m.get(r, c).im);
    let mut best: Option<(f64, Matrix4<f64>, [Complex64; 4])> = None;
    for &t in &COEFFS {
        let s = re + im * t;
        let s = (s + s.transpose()) * 0.5;
        let mut p = SymmetricEigen::new(s).eigenvectors;
        if p.determinant() < 0.0 {
            for r in 0..4 {
                p[(r, 0)] = -p[(r, 0)];
            }
        }
        let pc = ComplexMatrix::from_fn(4, 4, |r, c| Complex64::new(p[(r, c)], 0.0));
        let d = &(&pc.transpose() * m) * &pc;
        let mut off = 0.0;
        for r in 0..4 {
            for c in 0..4 {
                if r != c {
                    off += d.get(r, c).norm_sqr();
                }
            }
        }
        let diag = [d.get(0, 0), d.get(1, 1), d.get(2, 2), d.get(3, 3)];
        if off.sqrt() < 1e-13 {
            return (p, diag);
        }
        if best.as_ref().is_none_or(|(b, _, _)| off < *b) {
            best = Some((off, p, diag));
        }
    }
    let (_, p, diag) = best.expect("at least one attempt");
    (p, diag)
}

/// Decomposes a 4×4 unitary into its canonical form.
pub fn kak_decompose(u: &ComplexMatrix) -> Result<KakDecomposition> {
    if u.shape() != (4, 4) {
        return Err(Error::dim("4x4", format!("{}x{}", u.rows(), u.cols())));
    }
    u.require_unitary(UNITARY_TOL)?;

    let su = u.scale(cis(-u.determinant().arg() / 4.0));
    let b = magic_basis();
    let bd = b.dagger();
    let up = &(&bd * &su) * &b;
    let m = &up.transpose() * &up;

    let (p, lambdas) = real_orthogonal_diagonalizer(&m);
    let mut half: [f64; 4] = lambdas.map(|z| z.arg() / 2.0);
    // det of the half-phase diagonal must be +1 so that the left factor is in SO(4).
    let total: f64 = half.iter().sum();
    if (total / std::f64::consts::PI).round().rem_euclid(2.0) == 1.0 {
        half[0] += std::f64::consts::PI;
    }

    let pc = ComplexMatrix::from_fn(4, 4, |r, c| Complex64::new(p[(r, c)], 0.0));
    let d_inv = ComplexMatrix::diag_phases(&half.map(|h| -h));
    let k1 = &(&up * &pc) * &d_inv;
    let k_left = &(&b * &k1) * &bd;
    let k_right = &(&b * &pc.transpose()) * &bd;

    // Solve φ_j = g + α·(x_j, y_j, z_j) on the orthogonal ±1 sign patterns.
    let mut alpha = [0.0; 3];
    for (k, a) in alpha.iter_mut().enumerate() {
        let pp = tensor(&pauli(k), &pauli(k));
        let signs = &(&bd * &pp) * &b;
        *a = (0..4).map(|j| signs.get(j, j).re * half[j]).sum::<f64>() / 4.0;
    }

    let mut frame = LocalFrame::new();
    for k in 0..3 {
        let n = ((alpha[k] + FRAC_PI_4) / FRAC_PI_2).ceil() as i64 - 1;
        frame.shift(&mut alpha, k, n);
    }
    if alpha[0].abs() < alpha[1].abs() {
        frame.swap(&mut alpha, 0, 1);
    }
    if alpha[1].abs() < alpha[2].abs() {
        frame.swap(&mut alpha, 1, 2);
    }
    if alpha[0].abs() < alpha[1].abs() {
        frame.swap(&mut alpha, 0, 1);
    }
    if alpha[0] < 0.0 {
        frame.flip_others(&mut alpha, 1);
    }
    if alpha[1] < 0.0 {
        frame.flip_others(&mut alpha, 0);
    }

    let left = nearest_product_factorization(&k_left)?;
    let right = nearest_product_factorization(&k_right)?;
    let (u_a, _) = split_determinant(&(&left.a * &frame.left[0]));
    let (u_b, _) = split_determinant(&(&left.b * &frame.left[1]));
    let (v_a, _) = split_determinant(&(&frame.right[0] * &right.a));
    let (v_b, _) = split_determinant(&(&frame.right[1] * &right.b));

    let mut k = KakDecomposition {
        u_a,
        u_b,
        v_a,
        v_b,
        alpha,
        global_phase: 0.0,
    };
    let body = kak_reconstruct(&k);
    let overlap: Complex64 = body
        .inner()
        .iter()
        .zip(u.inner().iter())
        .map(|(x, y)| x.conj() * y)
        .sum();
    k.global_phase = overlap.arg();
    Ok(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{phase_distance, random_special_unitary, random_unitary};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Taylor-series exponential with scaling and squaring; test oracle only.
    fn expm(a: &ComplexMatrix) -> ComplexMatrix {
        let n = a.rows();
        let norm = a.frobenius_norm();
        let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
        let scaled = a.scale(Complex64::new(0.5f64.powi(squarings as i32), 0.0));
        let mut term = ComplexMatrix::identity(n);
        let mut sum = ComplexMatrix::identity(n);
        for j in 1..30 {
            term = (&term * &scaled).scale(Complex64::new(1.0 / j as f64, 0.0));
            sum = sum.add(&term);
        }
        (0..squarings).fold(sum, |acc, _| &acc * &acc)
    }

    fn hamiltonian(alpha: [f64; 3]) -> ComplexMatrix {
        let terms = [tensor(&gates::x(), &gates::x()), tensor(&gates::y(), &gates::y()), tensor(&gates::z(), &gates::z())];
        terms
            .iter()
            .zip(alpha)
            .fold(ComplexMatrix::zeros(4, 4), |acc, (t, a)| acc.add(&t.scale(I * a)))
    }

    /// Local invariants of a two-qubit gate (trace-based); independent oracle
    /// for local equivalence.
    fn local_invariants(u: &ComplexMatrix) -> (Complex64, f64) {
        let b = magic_basis();
        let ub = &(&b.dagger() * u) * &b;
        let m = &ub.transpose() * &ub;
        let det = u.determinant();
        let tr = m.trace();
        let g1 = tr * tr / (16.0 * det);
        let g2 = ((tr * tr - (&m * &m).trace()) / (4.0 * det)).re;
        (g1, g2)
    }

    #[test]
    fn interaction_matches_exponential_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let alpha = [rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)];
            let want = expm(&hamiltonian(alpha));
            assert!(interaction(alpha).max_abs_diff(&want) < 1e-12);
        }
    }

    #[test]
    fn oracle_confirms_swap_and_cnot_invariants() {
        let swap_like = expm(&hamiltonian([FRAC_PI_4; 3]));
        assert!(phase_distance(&swap_like, &gates::swap()).unwrap() < 1e-12);

        let cnot_like = expm(&hamiltonian([FRAC_PI_4, 0.0, 0.0]));
        let (a1, a2) = local_invariants(&cnot_like);
        let (b1, b2) = local_invariants(&gates::cnot());
        assert!((a1 - b1).norm() < 1e-12 && (a2 - b2).abs() < 1e-12);
    }

    #[test]
    fn magic_basis_makes_locals_real() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let b = magic_basis();
        for _ in 0..20 {
            let l = tensor(&random_special_unitary(2, &mut rng), &random_special_unitary(2, &mut rng));
            let o = &(&b.dagger() * &l) * &b;
            assert!(o.inner().iter().all(|z| z.im.abs() < 1e-12));
        }
    }

    #[test]
    fn identity_decomposes_trivially() {
        let k = kak_decompose(&ComplexMatrix::identity(4)).unwrap();
        assert!(k.alpha.iter().all(|a| a.abs() < 1e-12));
        assert!(phase_distance(&k.reconstruct(), &ComplexMatrix::identity(4)).unwrap() < 1e-12);
    }

    #[test]
    fn cnot_and_swap_coordinates() {
        let k = kak_decompose(&gates::cnot()).unwrap();
        assert!((k.alpha[0] - FRAC_PI_4).abs() < 1e-8, "{:?}", k.alpha);
        assert!(k.alpha[1].abs() < 1e-8 && k.alpha[2].abs() < 1e-8, "{:?}", k.alpha);
        assert!(phase_distance(&k.reconstruct(), &gates::cnot()).unwrap() < 1e-9);

        let k = kak_decompose(&gates::swap()).unwrap();
        for a in k.alpha {
            assert!((a - FRAC_PI_4).abs() < 1e-8, "{:?}", k.alpha);
        }
        assert!(phase_distance(&k.reconstruct(), &gates::swap()).unwrap() < 1e-9);
    }

    #[test]
    fn reconstruct_examples() {
        let id = ComplexMatrix::identity(2);
        let mut k = KakDecomposition {
            u_a: id.clone(),
            u_b: id.clone(),
            v_a: id.clone(),
            v_b: id,
            alpha: [0.0; 3],
            global_phase: 0.0,
        };
        assert!(k.reconstruct().max_abs_diff(&ComplexMatrix::identity(4)) < 1e-15);
        k.alpha = [FRAC_PI_4; 3];
        assert!(phase_distance(&k.reconstruct(), &gates::swap()).unwrap() < 1e-12);
    }

    #[test]
    fn random_unitaries_reconstruct_with_unit_determinants() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..300 {
            let u = random_unitary(4, &mut rng);
            let k = kak_decompose(&u).unwrap();
            assert!(phase_distance(&k.reconstruct(), &u).unwrap() < 1e-9);
            assert!(k.in_weyl_chamber(1e-12), "{:?}", k.alpha);
            for f in [&k.u_a, &k.u_b, &k.v_a, &k.v_b] {
                assert!((f.determinant() - ONE).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn degenerate_inputs_reconstruct() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let specials = [
            gates::cnot(),
            gates::cz(),
            gates::swap(),
            gates::w(0.3),
            tensor(&gates::h(), &gates::x()),
            interaction([FRAC_PI_4, FRAC_PI_4, 0.0]),
            interaction([FRAC_PI_4, 0.2, -0.2]),
            interaction([0.3, 0.3, 0.3]),
        ];
        for s in specials {
            for _ in 0..10 {
                let l = tensor(&random_unitary(2, &mut rng), &random_unitary(2, &mut rng));
                let r = tensor(&random_unitary(2, &mut rng), &random_unitary(2, &mut rng));
                let u = &(&l * &s) * &r;
                let k = kak_decompose(&u).unwrap();
                assert!(phase_distance(&k.reconstruct(), &u).unwrap() < 1e-9);
                assert!(k.in_weyl_chamber(1e-9), "{:?}", k.alpha);
            }
        }
    }

    #[test]
    fn interior_coordinates_are_recovered() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut seen = 0;
        while seen < 200 {
            let ax: f64 = rng.random_range(0.0..FRAC_PI_4);
            let ay: f64 = rng.random_range(0.0..FRAC_PI_4);
            let az: f64 = rng.random_range(-FRAC_PI_4..FRAC_PI_4);
            if !(FRAC_PI_4 - ax > 1e-3 && ax - ay > 1e-3 && ay - az.abs() > 1e-3) {
                continue;
            }
            seen += 1;
            let k = KakDecomposition {
                u_a: random_special_unitary(2, &mut rng),
                u_b: random_special_unitary(2, &mut rng),
                v_a: random_special_unitary(2, &mut rng),
                v_b: random_special_unitary(2, &mut rng),
                alpha: [ax, ay, az],
                global_phase: rng.random_range(-3.0..3.0),
            };
            let back = kak_decompose(&k.reconstruct()).unwrap();
            for (a, b) in back.alpha.iter().zip(k.alpha) {
                assert!((a - b).abs() < 1e-8, "{:?} vs {:?}", back.alpha, k.alpha);
            }
        }
    }

    #[test]
    fn rejects_non_unitary() {
        let m = ComplexMatrix::diag(&[ONE, ONE, ONE, Complex64::new(2.0, 0.0)]);
        assert!(matches!(kak_decompose(&m), Err(Error::NotUnitary { .. })));
    }
}
