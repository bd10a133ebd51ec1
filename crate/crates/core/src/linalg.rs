//! Dense complex linear algebra for the 2-, 4- and 8-dimensional matrices
//! that appear in three-qubit synthesis.
//!
//! [`ComplexMatrix`] is a thin newtype over a dynamically sized
//! `nalgebra` matrix. Everything here is a pure function of its inputs.

use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Index, Mul};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Default tolerance for unitarity checks.
pub const UNITARY_TOL: f64 = 1e-10;
/// Default tolerance for matrix equality up to global phase.
pub const EQUALITY_TOL: f64 = 1e-9;
/// Default tolerance on the second singular value of a rank-1 fit.
pub const RANK_ONE_TOL: f64 = 1e-8;
/// Eigenvalues closer than this are treated as one cluster.
pub const CLUSTER_TOL: f64 = 1e-8;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// `e^{i phi}`.
#[inline]
pub fn cis(phi: f64) -> Complex64 {
    Complex64::from_polar(1.0, phi)
}

/// Wraps an angle into `[0, 2π)`, snapping values within `1e-12` of `2π` to zero.
pub fn wrap_phase(phi: f64) -> f64 {
    let mut p = phi.rem_euclid(TAU);
    if TAU - p < 1e-12 {
        p = 0.0;
    }
    p
}

/// Dense complex matrix stored row-major in meaning, backed by `nalgebra`.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::dim(
                format!("{} entries", rows * cols),
                format!("{} entries", entries.len()),
            ));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self(DMatrix::from_row_slice(rows, cols, &entries)))
    }

    pub fn from_rows<R: AsRef<[Complex64]>>(rows: &[R]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.as_ref().len());
        if rows.iter().any(|row| row.as_ref().len() != c) {
            return Err(Error::dim("rectangular rows", "ragged rows"));
        }
        let entries = rows.iter().flat_map(|row| row.as_ref().iter().copied()).collect();
        Self::new(r, c, entries)
    }

    /// Real-valued convenience constructor, mostly for permutation-like gates.
    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|row| row.as_ref().iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn diag(entries: &[Complex64]) -> Self {
        let n = entries.len();
        Self(DMatrix::from_fn(n, n, |r, c| if r == c { entries[r] } else { ZERO }))
    }

    /// Diagonal matrix `diag(e^{i phases[k]})`.
    pub fn diag_phases(phases: &[f64]) -> Self {
        let entries: Vec<Complex64> = phases.iter().map(|&p| cis(p)).collect();
        Self::diag(&entries)
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        Self(DMatrix::from_fn(rows, cols, f))
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows(), self.cols())
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.0[(r, c)]
    }

    pub fn inner(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<Complex64> {
        self.0
    }

    /// Row-major copy of the entries.
    pub fn to_row_major(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for r in 0..self.rows() {
            for c in 0..self.cols() {
                out.push(self.0[(r, c)]);
            }
        }
        out
    }

    pub fn dagger(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn conj(&self) -> Self {
        Self(self.0.map(|z| z.conj()))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self(self.0.map(|z| z * s))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(&self.0 - &other.0)
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn determinant(&self) -> Complex64 {
        self.0.determinant()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Matrix power with a non-negative integer exponent.
    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::identity(self.rows()), |acc, _| &acc * self)
    }

    /// Applies the matrix to a column vector.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.rows())
            .map(|r| (0..self.cols()).map(|c| self.0[(r, c)] * v[c]).sum())
            .collect()
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::dim(
                "square matrix",
                format!("{}x{}", self.rows(), self.cols()),
            ))
        }
    }

    fn require_same_shape(&self, other: &Self) -> Result<()> {
        if self.shape() == other.shape() {
            Ok(())
        } else {
            Err(Error::dim(
                format!("{}x{}", self.rows(), self.cols()),
                format!("{}x{}", other.rows(), other.cols()),
            ))
        }
    }

    /// `‖m†m − I‖_F`.
    pub fn unitarity_deviation(&self) -> Result<f64> {
        self.require_square()?;
        let prod = self.0.adjoint() * &self.0;
        let n = self.rows();
        Ok((prod - DMatrix::<Complex64>::identity(n, n))
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    /// Errors with [`Error::NotUnitary`] unless the deviation is within `tol`.
    pub fn require_unitary(&self, tol: f64) -> Result<()> {
        let deviation = self.unitarity_deviation()?;
        if deviation <= tol {
            Ok(())
        } else {
            Err(Error::NotUnitary { deviation })
        }
    }
}

impl From<DMatrix<Complex64>> for ComplexMatrix {
    fn from(m: DMatrix<Complex64>) -> Self {
        Self(m)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, idx: (usize, usize)) -> &Complex64 {
        &self.0[idx]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols(), rhs.rows(), "matrix product dimension mismatch");
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl Mul for ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: ComplexMatrix) -> ComplexMatrix {
        &self * &rhs
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows(), self.cols())?;
        for r in 0..self.rows() {
            write!(f, "  ")?;
            for c in 0..self.cols() {
                let z = self.0[(r, c)];
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Kronecker product; `a` is the slow index.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix(a.0.kronecker(&b.0))
}

/// `true` iff `‖m†m − I‖_F ≤ tol`.
pub fn is_unitary(m: &ComplexMatrix, tol: f64) -> Result<bool> {
    Ok(m.unitarity_deviation()? <= tol)
}

/// Eigenvalues with their multiplicities, clustered at [`CLUSTER_TOL`].
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub eigenvalues: Vec<Complex64>,
    pub multiplicities: Vec<usize>,
}

impl Spectrum {
    pub fn dimension(&self) -> usize {
        self.multiplicities.iter().sum()
    }

    /// Phases of the distinct eigenvalues in `[0, 2π)`.
    pub fn phases(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|z| wrap_phase(z.arg())).collect()
    }
}

/// `m = P · diag(λ) · P†` with `P` unitary.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    /// One eigenvalue per column of `vectors`, sorted by phase in `[0, 2π)`.
    pub eigenvalues: Vec<Complex64>,
    pub vectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn phases(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|z| wrap_phase(z.arg())).collect()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        let d = ComplexMatrix::diag(&self.eigenvalues);
        &(&self.vectors * &d) * &self.vectors.dagger()
    }

    pub fn spectrum(&self) -> Spectrum {
        let mut eigenvalues: Vec<Complex64> = Vec::new();
        let mut multiplicities: Vec<usize> = Vec::new();
        // Sorted by phase, so clusters are contiguous except across the 0/2π seam.
        for &z in &self.eigenvalues {
            match eigenvalues.last() {
                Some(&prev) if (prev - z).norm() < CLUSTER_TOL => {
                    *multiplicities.last_mut().unwrap() += 1;
                }
                _ => {
                    eigenvalues.push(z);
                    multiplicities.push(1);
                }
            }
        }
        if eigenvalues.len() > 1 && (eigenvalues[0] - eigenvalues[eigenvalues.len() - 1]).norm() < CLUSTER_TOL {
            let tail = multiplicities.pop().unwrap();
            eigenvalues.pop();
            multiplicities[0] += tail;
        }
        Spectrum {
            eigenvalues,
            multiplicities,
        }
    }
}

/// Eigendecomposition of a unitary matrix through its complex Schur form.
///
/// For a normal matrix the Schur factor is diagonal up to roundoff, so the
/// unitary Schur vectors are eigenvectors and degenerate clusters come out
/// orthonormal.
pub fn eig_unitary(m: &ComplexMatrix) -> Result<EigenDecomposition> {
    m.require_unitary(UNITARY_TOL)?;
    let n = m.rows();
    let schur = nalgebra::Schur::try_new(m.0.clone(), 1e-15, 10_000)
        .or_else(|| nalgebra::Schur::try_new(m.0.clone(), 1e-13, 100_000))
        .expect("Schur iteration failed to converge on a unitary matrix");
    let (q, t) = schur.unpack();

    let mut order: Vec<usize> = (0..n).collect();
    let phase = |k: usize| wrap_phase(t[(k, k)].arg());
    order.sort_by(|&a, &b| phase(a).total_cmp(&phase(b)));

    let eigenvalues = order.iter().map(|&k| t[(k, k)]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| q[(r, order[c])]);
    Ok(EigenDecomposition {
        eigenvalues,
        vectors: ComplexMatrix(vectors),
    })
}

/// `min_φ ‖u − e^{iφ} v‖_F`.
pub fn phase_distance(u: &ComplexMatrix, v: &ComplexMatrix) -> Result<f64> {
    u.require_same_shape(v)?;
    let overlap: Complex64 = v.0.iter().zip(u.0.iter()).map(|(a, b)| a.conj() * b).sum();
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        ONE
    };
    Ok(u.0
        .iter()
        .zip(v.0.iter())
        .map(|(a, b)| (a - phase * b).norm_sqr())
        .sum::<f64>()
        .sqrt())
}

/// `1 − |tr(u†v)| / d`, clamped to `[0, 1]`.
pub fn infidelity(u: &ComplexMatrix, v: &ComplexMatrix) -> Result<f64> {
    u.require_same_shape(v)?;
    u.require_square()?;
    let overlap: Complex64 = u.0.iter().zip(v.0.iter()).map(|(a, b)| a.conj() * b).sum();
    Ok((1.0 - overlap.norm() / u.rows() as f64).clamp(0.0, 1.0))
}

/// Best rank-1 tensor-product fit of a 4×4 matrix.
#[derive(Debug, Clone)]
pub struct ProductFactorization {
    pub a: ComplexMatrix,
    pub b: ComplexMatrix,
    /// Second-largest singular value of the operator-Schmidt reshaping.
    pub residual: f64,
}

impl ProductFactorization {
    pub fn is_exact(&self, tol: f64) -> bool {
        self.residual <= tol
    }
}

/// Factors `m ≈ a ⊗ b` via the dominant singular pair of the reshaped
/// coefficient matrix `R[(i₁j₁),(i₂j₂)] = m[2i₁+i₂, 2j₁+j₂]`.
///
/// Both factors carry `√σ₁`, so for a unitary product each factor is unitary
/// up to a phase.
pub fn nearest_product_factorization(m: &ComplexMatrix) -> Result<ProductFactorization> {
    if m.shape() != (4, 4) {
        return Err(Error::dim("4x4", format!("{}x{}", m.rows(), m.cols())));
    }
    let reshaped = DMatrix::from_fn(4, 4, |row, col| {
        let (i1, j1) = (row / 2, row % 2);
        let (i2, j2) = (col / 2, col % 2);
        m.0[(2 * i1 + i2, 2 * j1 + j2)]
    });
    // Singular values from the SVD; the leading singular pair from the
    // Hermitian eigenproblem of R†R, since the SVD's vectors were observed to
    // be inconsistent on rank-deficient complex inputs.
    let singular = reshaped.clone().singular_values();
    let mut sorted: Vec<f64> = singular.iter().copied().collect();
    sorted.sort_by(|x, y| y.total_cmp(x));
    let gram = reshaped.adjoint() * &reshaped;
    let eig = gram.symmetric_eigen();
    let top = (0..4)
        .max_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]))
        .expect("non-empty");
    let v = eig.eigenvectors.column(top).into_owned();
    let rv = &reshaped * &v;
    let sigma = rv.norm();
    let root = sigma.sqrt();
    let (a, b) = if sigma > 0.0 {
        (
            DMatrix::from_fn(2, 2, |i, j| rv[2 * i + j] / root),
            DMatrix::from_fn(2, 2, |i, j| v[2 * i + j].conj() * root),
        )
    } else {
        (DMatrix::zeros(2, 2), DMatrix::zeros(2, 2))
    };
    Ok(ProductFactorization {
        a: ComplexMatrix(a),
        b: ComplexMatrix(b),
        residual: sorted[1],
    })
}

/// Principal square root of a complex number's phase split, used to move a
/// 2×2 matrix into SU(2): returns `(m / √det m, √det m)`.
pub fn split_determinant(m: &ComplexMatrix) -> (ComplexMatrix, Complex64) {
    let root = m.determinant().sqrt();
    (m.scale(root.inv()), root)
}

/// Haar-random unitary via QR of a complex Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = DMatrix::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im)
    });
    let qr = g.qr();
    let (q, r) = qr.unpack();
    let q = DMatrix::from_fn(n, n, |row, col| {
        let d = r[(col, col)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { ONE };
        q[(row, col)] * phase
    });
    ComplexMatrix(q)
}

/// Haar-random element of SU(n).
pub fn random_special_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let u = random_unitary(n, rng);
    let det = u.determinant();
    u.scale(cis(-det.arg() / n as f64))
}
