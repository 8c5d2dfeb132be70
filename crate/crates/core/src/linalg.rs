//! Dense complex matrices of dimension 2 and 4.
//!
//! Everything the protocol manipulates (single-qubit densities, Pauli
//! operators, strategy unitaries, two-qubit states and payoff operators)
//! lives in one of these two sizes, so [`ComplexMatrix`] stores a fixed
//! 4×4 buffer and only uses the leading `dim × dim` block.

use std::fmt;

use num_complex::Complex64;

use crate::error::{QtomoError, Result};

/// Scalar type for all matrix entries.
pub type ComplexScalar = Complex64;

/// Default tolerance used by the validating predicates.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Jacobi sweeps stop once the largest off-diagonal magnitude drops below this.
pub const JACOBI_OFF_DIAG_TOL: f64 = 1e-12;

/// Upper bound on cyclic Jacobi sweeps.
pub const JACOBI_MAX_SWEEPS: usize = 100;

const MAX_DIM: usize = 4;
const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Shorthand constructor for a complex scalar.
#[inline]
pub const fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Square complex matrix of dimension 2 or 4, row-major.
#[derive(Clone, Copy, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: [Complex64; MAX_DIM * MAX_DIM],
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 2 || dim == 4 {
        Ok(())
    } else {
        Err(QtomoError::UnsupportedDimension(dim))
    }
}

impl ComplexMatrix {
    /// All-zero matrix.
    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            data: [ZERO; MAX_DIM * MAX_DIM],
        })
    }

    /// Identity matrix.
    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m.data[i * MAX_DIM + i] = ONE;
        }
        Ok(m)
    }

    /// Builds a matrix from rows. Rejects ragged input, unsupported sizes and
    /// non-finite entries.
    pub fn from_rows<R: AsRef<[Complex64]>>(rows: &[R]) -> Result<Self> {
        let dim = rows.len();
        let mut m = Self::zeros(dim)?;
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(QtomoError::RaggedRows {
                    expected: dim,
                    found: row.len(),
                    row: i,
                });
            }
            for (j, &z) in row.iter().enumerate() {
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(QtomoError::NonFinite);
                }
                m.data[i * MAX_DIM + j] = z;
            }
        }
        Ok(m)
    }

    /// Real matrix from rows of `f64`.
    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| c64(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    /// Diagonal matrix with the given entries.
    pub fn diag(entries: &[Complex64]) -> Result<Self> {
        let mut m = Self::zeros(entries.len())?;
        for (i, &z) in entries.iter().enumerate() {
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(QtomoError::NonFinite);
            }
            m.data[i * MAX_DIM + i] = z;
        }
        Ok(m)
    }

    /// Real diagonal matrix.
    pub fn diag_real(entries: &[f64]) -> Result<Self> {
        let entries: Vec<Complex64> = entries.iter().map(|&x| c64(x, 0.0)).collect();
        Self::diag(&entries)
    }

    /// Projector |ψ⟩⟨ψ| onto a (not necessarily normalized) vector.
    pub fn outer(psi: &[Complex64]) -> Result<Self> {
        let mut m = Self::zeros(psi.len())?;
        for (i, a) in psi.iter().enumerate() {
            for (j, b) in psi.iter().enumerate() {
                m.data[i * MAX_DIM + j] = a * b.conj();
            }
        }
        if !m.is_finite() {
            return Err(QtomoError::NonFinite);
        }
        Ok(m)
    }

    /// Computational-basis projector |i⟩⟨i|.
    pub fn basis_projector(dim: usize, index: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        if index >= dim {
            return Err(QtomoError::IndexOutOfRange { index, dim });
        }
        m.data[index * MAX_DIM + index] = ONE;
        Ok(m)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entry at row `i`, column `j`.
    ///
    /// # Panics
    /// If either index is outside `0..dim`.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        assert!(i < self.dim && j < self.dim, "index ({i}, {j}) out of range");
        self.data[i * MAX_DIM + j]
    }

    /// Rows as nested vectors.
    pub fn to_rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j)).collect())
            .collect()
    }

    /// Main diagonal.
    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    fn is_finite(&self) -> bool {
        self.entries().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    fn entries(&self) -> impl Iterator<Item = Complex64> + '_ {
        (0..self.dim).flat_map(move |i| (0..self.dim).map(move |j| self.get(i, j)))
    }

    fn same_dim(&self, other: &Self) -> Result<()> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(QtomoError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            })
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        self.same_dim(other)?;
        let mut out = *self;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let k = i * MAX_DIM + j;
                out.data[k] = f(self.data[k], other.data[k]);
            }
        }
        Ok(out)
    }

    /// Matrix product `self · other`.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        let n = self.dim;
        let mut out = *self;
        for i in 0..n {
            for j in 0..n {
                let mut acc = ZERO;
                for k in 0..n {
                    acc += self.data[i * MAX_DIM + k] * other.data[k * MAX_DIM + j];
                }
                out.data[i * MAX_DIM + j] = acc;
            }
        }
        Ok(out)
    }

    /// Tensor product of two 2×2 matrices in basis order |00⟩, |01⟩, |10⟩, |11⟩.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        if self.dim != 2 {
            return Err(QtomoError::UnsupportedDimension(self.dim));
        }
        if other.dim != 2 {
            return Err(QtomoError::UnsupportedDimension(other.dim));
        }
        let mut out = Self::zeros(4)?;
        for (ai, aj) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let a = self.get(ai, aj);
            for bi in 0..2 {
                for bj in 0..2 {
                    out.data[(2 * ai + bi) * MAX_DIM + 2 * aj + bj] = a * other.get(bi, bj);
                }
            }
        }
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let mut out = *self;
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.data[j * MAX_DIM + i] = self.data[i * MAX_DIM + j].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    /// Multiplies every entry by `c`.
    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = *self;
        for z in out.data.iter_mut() {
            *z *= c;
        }
        out
    }

    /// Unitary conjugation `u · self · u†`.
    pub fn conjugate_by(&self, u: &Self) -> Result<Self> {
        u.matmul(self)?.matmul(&u.dagger())
    }

    /// Largest entry magnitude.
    pub fn max_norm(&self) -> f64 {
        self.entries().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Max-entry distance between two matrices of equal dimension.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.max_norm())
    }

    /// `‖a·a† − I‖_max ≤ tol`.
    pub fn is_unitary(&self, tol: f64) -> bool {
        let prod = self
            .matmul(&self.dagger())
            .expect("a matrix always matches its own adjoint");
        let id = Self::identity(self.dim).expect("dimension already validated");
        prod.max_abs_diff(&id).is_ok_and(|d| d <= tol)
    }

    /// `‖a − a†‖_max ≤ tol`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.dagger()).is_ok_and(|d| d <= tol)
    }

    /// Hermitian within `tol`, unit trace within `tol`, and no eigenvalue below `-tol`.
    pub fn is_density(&self, tol: f64) -> bool {
        if !self.is_hermitian(tol) {
            return false;
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
            return false;
        }
        self.hermitian_eigenvalues()
            .iter()
            .all(|&lambda| lambda >= -tol)
    }

    /// Eigen-decomposition of the Hermitian part of `self`.
    pub fn hermitian_eigen(&self) -> HermitianEigen {
        jacobi_eigen(self)
    }

    /// Eigenvalues of the Hermitian part of `self`, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        self.hermitian_eigen().values
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}

/// Result of a Hermitian eigen-decomposition: `a = V · diag(values) · V†`.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Unitary whose columns are the matching eigenvectors.
    pub vectors: ComplexMatrix,
    /// Number of full cyclic sweeps performed.
    pub sweeps: usize,
}

impl HermitianEigen {
    /// Rebuilds `V · diag(values) · V†`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let lambda: Vec<Complex64> = self.values.iter().map(|&x| c64(x, 0.0)).collect();
        let d = ComplexMatrix::diag(&lambda).expect("eigenvalues are finite");
        self.vectors
            .matmul(&d)
            .and_then(|vd| vd.matmul(&self.vectors.dagger()))
            .expect("dimensions agree")
    }
}

fn off_diagonal_max(a: &ComplexMatrix) -> f64 {
    let mut m = 0.0f64;
    for i in 0..a.dim {
        for j in 0..a.dim {
            if i != j {
                m = m.max(a.get(i, j).norm());
            }
        }
    }
    m
}

/// Cyclic Jacobi rotations on the Hermitian part `(a + a†)/2`.
///
/// Each (p, q) rotation first removes the phase of `a[p][q]` and then applies
/// the real symmetric Schur rotation that annihilates the now-real entry.
fn jacobi_eigen(input: &ComplexMatrix) -> HermitianEigen {
    let n = input.dim;
    let mut a = input
        .add(&input.dagger())
        .expect("a matrix always matches its own adjoint")
        .scale(c64(0.5, 0.0));
    let mut v = ComplexMatrix::identity(n).expect("dimension already validated");

    let mut sweeps = 0;
    while sweeps < JACOBI_MAX_SWEEPS && off_diagonal_max(&a) >= JACOBI_OFF_DIAG_TOL {
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                let phase = apq / r;
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                let mut j = ComplexMatrix::identity(n).expect("dimension already validated");
                j.data[p * MAX_DIM + p] = c64(c, 0.0);
                j.data[p * MAX_DIM + q] = c64(s, 0.0);
                j.data[q * MAX_DIM + p] = -phase.conj() * s;
                j.data[q * MAX_DIM + q] = phase.conj() * c;

                a = j
                    .dagger()
                    .matmul(&a)
                    .and_then(|ja| ja.matmul(&j))
                    .expect("dimensions agree");
                // Kill rounding residue on the rotated pair and keep the diagonal real.
                a.data[p * MAX_DIM + q] = ZERO;
                a.data[q * MAX_DIM + p] = ZERO;
                for i in 0..n {
                    a.data[i * MAX_DIM + i].im = 0.0;
                }
                v = v.matmul(&j).expect("dimensions agree");
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a.get(x, x).re.total_cmp(&a.get(y, y).re));
    let values = order.iter().map(|&i| a.get(i, i).re).collect();
    let mut vectors = v;
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            vectors.data[row * MAX_DIM + col] = v.get(row, src);
        }
    }
    HermitianEigen {
        values,
        vectors,
        sweeps,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sx() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap()
    }
    fn sy() -> ComplexMatrix {
        ComplexMatrix::from_rows(&[[ZERO, c64(0.0, -1.0)], [c64(0.0, 1.0), ZERO]]).unwrap()
    }
    fn sz() -> ComplexMatrix {
        ComplexMatrix::diag_real(&[1.0, -1.0]).unwrap()
    }
    fn i2() -> ComplexMatrix {
        ComplexMatrix::identity(2).unwrap()
    }

    #[test]
    fn rejects_unsupported_dims_and_nan() {
        assert!(matches!(
            ComplexMatrix::zeros(3),
            Err(QtomoError::UnsupportedDimension(3))
        ));
        assert!(ComplexMatrix::from_real_rows(&[[f64::NAN, 0.0], [0.0, 1.0]]).is_err());
        assert!(ComplexMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0]]).is_err());
    }

    #[test]
    fn matmul_examples() {
        let m = ComplexMatrix::from_rows(&[[c64(1.0, 2.0), c64(-0.5, 0.0)], [c64(0.0, 3.0), c64(4.0, -1.0)]])
            .unwrap();
        assert_eq!(i2().matmul(&m).unwrap(), m);
        assert_eq!(sx().matmul(&sx()).unwrap(), i2());
        // σx σy = [[0,1],[1,0]]·[[0,-i],[i,0]] = [[i,0],[0,-i]] = i σz
        assert_eq!(sx().matmul(&sy()).unwrap(), sz().scale(c64(0.0, 1.0)));
        assert!(matches!(
            i2().matmul(&ComplexMatrix::identity(4).unwrap()),
            Err(QtomoError::DimensionMismatch { left: 2, right: 4 })
        ));
    }

    #[test]
    fn kron_examples() {
        assert_eq!(i2().kron(&i2()).unwrap(), ComplexMatrix::identity(4).unwrap());
        let p0 = ComplexMatrix::basis_projector(2, 0).unwrap();
        let p1 = ComplexMatrix::basis_projector(2, 1).unwrap();
        assert_eq!(
            p0.kron(&p1).unwrap(),
            ComplexMatrix::diag_real(&[0.0, 1.0, 0.0, 0.0]).unwrap()
        );
        assert_eq!(
            sz().kron(&sz()).unwrap(),
            ComplexMatrix::diag_real(&[1.0, -1.0, -1.0, 1.0]).unwrap()
        );
        let i4 = ComplexMatrix::identity(4).unwrap();
        assert!(i4.kron(&i2()).is_err());
        assert!(i2().kron(&i4).is_err());
    }

    #[test]
    fn dagger_examples() {
        assert_eq!(i2().dagger(), i2());
        assert_eq!(sy().dagger(), sy());
        let a = ComplexMatrix::from_rows(&[[ZERO, c64(0.0, 1.0)], [ZERO, ZERO]]).unwrap();
        let expected = ComplexMatrix::from_rows(&[[ZERO, ZERO], [c64(0.0, -1.0), ZERO]]).unwrap();
        assert_eq!(a.dagger(), expected);
    }

    #[test]
    fn trace_examples() {
        assert_eq!(ComplexMatrix::identity(4).unwrap().trace(), c64(4.0, 0.0));
        assert_eq!(sx().trace(), ZERO);
        let rho = ComplexMatrix::from_rows(&[[c64(0.3, 0.0), c64(0.1, -0.2)], [c64(0.1, 0.2), c64(0.7, 0.0)]])
            .unwrap();
        let p0 = ComplexMatrix::basis_projector(2, 0).unwrap();
        let big = p0.kron(&rho).unwrap();
        assert!((big.trace() - rho.trace()).norm() < 1e-15);
    }

    #[test]
    fn elementwise_examples() {
        let m = sy();
        assert_eq!(m.add(&ComplexMatrix::zeros(2).unwrap()).unwrap(), m);
        let half = c64(0.5, 0.0);
        let proj = i2().scale(half).add(&sz().scale(half)).unwrap();
        assert_eq!(proj, ComplexMatrix::basis_projector(2, 0).unwrap());
        assert_eq!(sx().sub(&sx()).unwrap(), ComplexMatrix::zeros(2).unwrap());
    }

    #[test]
    fn unitary_predicate() {
        assert!(i2().is_unitary(DEFAULT_TOL));
        assert!(sy().is_unitary(DEFAULT_TOL));
        assert!(!ComplexMatrix::diag_real(&[1.0, 0.5]).unwrap().is_unitary(DEFAULT_TOL));
    }

    #[test]
    fn density_predicate() {
        assert!(i2().scale(c64(0.5, 0.0)).is_density(DEFAULT_TOL));
        // Trace stays 1 but one eigenvalue dips to -1e-6.
        let bad = ComplexMatrix::diag_real(&[1.0 + 1e-6, -1e-6]).unwrap();
        assert!(!bad.is_density(DEFAULT_TOL));
        let within = ComplexMatrix::diag_real(&[1.0 + 1e-11, -1e-11]).unwrap();
        assert!(within.is_density(DEFAULT_TOL));
        // Hermitian with trace 1 but indefinite.
        let indefinite = ComplexMatrix::from_real_rows(&[[0.5, 0.8], [0.8, 0.5]]).unwrap();
        assert!(!indefinite.is_density(DEFAULT_TOL));
        let non_herm = ComplexMatrix::from_real_rows(&[[0.5, 0.1], [0.0, 0.5]]).unwrap();
        assert!(!non_herm.is_density(DEFAULT_TOL));
        assert!(!ComplexMatrix::identity(2).unwrap().is_density(DEFAULT_TOL));
    }

    #[test]
    fn jacobi_on_known_spectrum() {
        // σx + σy has eigenvalues ±√2.
        let h = sx().add(&sy()).unwrap();
        let e = h.hermitian_eigen();
        let r2 = 2f64.sqrt();
        assert!((e.values[0] + r2).abs() < 1e-14);
        assert!((e.values[1] - r2).abs() < 1e-14);
        assert!(e.vectors.is_unitary(1e-13));
        assert!(e.reconstruct().max_abs_diff(&h).unwrap() < 1e-13);

        let zz = sz().kron(&sz()).unwrap();
        assert_eq!(zz.hermitian_eigen().sweeps, 0);
        assert_eq!(zz.hermitian_eigenvalues(), vec![-1.0, -1.0, 1.0, 1.0]);
    }

    #[test]
    fn get_and_rows() {
        let m = sy();
        assert_eq!(m.get(0, 1), c64(0.0, -1.0));
        assert_eq!(m.to_rows()[1][0], c64(0.0, 1.0));
        assert_eq!(m.diagonal(), vec![ZERO, ZERO]);
        assert!(matches!(
            ComplexMatrix::basis_projector(2, 2),
            Err(QtomoError::IndexOutOfRange { index: 2, dim: 2 })
        ));
    }
}
