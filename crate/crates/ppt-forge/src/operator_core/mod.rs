//! Dense complex Hermitian linear algebra.
//!
//! Provides the matrix carrier types used throughout the crate, the
//! Hermitian eigendecomposition (Householder tridiagonalization followed by
//! implicit-shift QL, see [`eig`]), positive-semidefiniteness tests with
//! reportable margins, and trace norms.

pub(crate) mod eig;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use eig::hermitian_eig;

/// Dense square complex matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Zero matrix of the given dimension.
    pub fn zeros(dim: usize) -> Self {
        ComplexMatrix {
            dim,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    /// Identity matrix of the given dimension.
    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from a row-major entry vector, validating shape and
    /// finiteness.
    pub fn from_entries(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("matrix dimension must be >= 1".into()));
        }
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                context: "ComplexMatrix::from_entries",
                expected: dim * dim,
                got: entries.len(),
            });
        }
        for (k, z) in entries.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite {
                    row: k / dim,
                    col: k % dim,
                });
            }
        }
        Ok(ComplexMatrix { dim, entries })
    }

    /// Builds a matrix by evaluating `f(row, col)`.
    pub fn from_fn<F: FnMut(usize, usize) -> Complex64>(dim: usize, mut f: F) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.entries[i * dim + j] = f(i, j);
            }
        }
        m
    }

    /// Matrix dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Row-major entry slice.
    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Entry accessor.
    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    /// Entry mutator.
    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.entries[row * self.dim + col] = value;
    }

    /// Entrywise sum.
    pub fn add(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, other.dim, "add: dimension mismatch");
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        ComplexMatrix { dim: self.dim, entries }
    }

    /// Entrywise difference.
    pub fn sub(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, other.dim, "sub: dimension mismatch");
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        ComplexMatrix { dim: self.dim, entries }
    }

    /// Scalar multiple by a real factor.
    pub fn scale(&self, factor: f64) -> ComplexMatrix {
        let entries = self.entries.iter().map(|a| a * factor).collect();
        ComplexMatrix { dim: self.dim, entries }
    }

    /// Adds `factor * other` into `self` in place (AXPY).
    pub fn axpy(&mut self, factor: f64, other: &ComplexMatrix) {
        assert_eq!(self.dim, other.dim, "axpy: dimension mismatch");
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            *a += b * factor;
        }
    }

    /// Matrix product `self * other`.
    pub fn matmul(&self, other: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, other.dim, "matmul: dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let row = &other.entries[k * n..(k + 1) * n];
                let dst = &mut out.entries[i * n..(i + 1) * n];
                for (o, b) in dst.iter_mut().zip(row) {
                    *o += a * b;
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> ComplexMatrix {
        let n = self.dim;
        ComplexMatrix::from_fn(n, |i, j| self.entries[j * n + i].conj())
    }

    /// Plain transpose (no conjugation).
    pub fn transpose(&self) -> ComplexMatrix {
        let n = self.dim;
        ComplexMatrix::from_fn(n, |i, j| self.entries[j * n + i])
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> ComplexMatrix {
        let entries = self.entries.iter().map(|z| z.conj()).collect();
        ComplexMatrix { dim: self.dim, entries }
    }

    /// Trace.
    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.entries[i * self.dim + i]).sum()
    }

    /// Real part of tr(self * other), evaluated without forming the product.
    pub fn trace_product_re(&self, other: &ComplexMatrix) -> f64 {
        assert_eq!(self.dim, other.dim, "trace_product_re: dimension mismatch");
        let n = self.dim;
        let mut acc = 0.0;
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                let b = other.entries[k * n + i];
                acc += a.re * b.re - a.im * b.im;
            }
        }
        acc
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry magnitude.
    pub fn max_abs_entry(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Kronecker product `self tensor other`.
    pub fn kron(&self, other: &ComplexMatrix) -> ComplexMatrix {
        let (n, m) = (self.dim, other.dim);
        let mut out = Self::zeros(n * m);
        for i in 0..n {
            for j in 0..n {
                let a = self.entries[i * n + j];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for k in 0..m {
                    for l in 0..m {
                        out.entries[(i * m + k) * n * m + (j * m + l)] =
                            a * other.entries[k * m + l];
                    }
                }
            }
        }
        out
    }

    /// Hermitian part (M + M†)/2.
    pub fn hermitian_part(&self) -> ComplexMatrix {
        let n = self.dim;
        ComplexMatrix::from_fn(n, |i, j| {
            (self.entries[i * n + j] + self.entries[j * n + i].conj()) * 0.5
        })
    }

    /// Largest entrywise deviation from Hermiticity, max |M - M†|.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let d = (self.entries[i * n + j] - self.entries[j * n + i].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }
}

/// Hermitian operator: a [`ComplexMatrix`] symmetrized at construction, with
/// the recorded deviation from exact Hermiticity.
#[derive(Debug, Clone)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
    hermiticity_defect: f64,
}

impl HermitianOperator {
    /// Wraps a matrix, recording its Hermiticity defect and then
    /// symmetrizing to (M + M†)/2 so downstream cone arithmetic can assume
    /// exact Hermiticity.
    ///
    /// Fails when the defect exceeds `1e-12 * max(1, max-entry magnitude)`.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let defect = matrix.hermiticity_defect();
        let bound = 1e-12 * matrix.max_abs_entry().max(1.0);
        if defect > bound {
            return Err(Error::NotHermitian {
                dim: matrix.dim(),
                defect,
                bound,
            });
        }
        Ok(HermitianOperator {
            matrix: matrix.hermitian_part(),
            hermiticity_defect: defect,
        })
    }

    /// The symmetrized matrix.
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Consumes the operator, returning the symmetrized matrix.
    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Deviation from Hermiticity recorded before symmetrization.
    pub fn hermiticity_defect(&self) -> f64 {
        self.hermiticity_defect
    }

    /// Matrix dimension.
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }
}

/// Tolerances used by cone-membership tests and solver exit criteria.
#[derive(Debug, Clone, Copy)]
pub struct ToleranceConfig {
    /// Absolute slack allowed below zero for smallest eigenvalues.
    pub psd_abs: f64,
    /// Relative slack, scaled by the spectral norm.
    pub psd_rel: f64,
    /// Equality-residual tolerance.
    pub eq_tol: f64,
    /// Duality-gap tolerance for optimality claims.
    pub gap_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        ToleranceConfig {
            psd_abs: 1e-10,
            psd_rel: 1e-9,
            eq_tol: 1e-9,
            gap_tol: 1e-7,
        }
    }
}

impl ToleranceConfig {
    /// Validates that every tolerance is strictly positive.
    pub fn validate(&self) -> Result<()> {
        if self.psd_abs > 0.0 && self.psd_rel > 0.0 && self.eq_tol > 0.0 && self.gap_tol > 0.0 {
            Ok(())
        } else {
            Err(Error::InvalidParameter(
                "all tolerances must be strictly positive".into(),
            ))
        }
    }
}

/// Result of a positive-semidefiniteness test.
#[derive(Debug, Clone, Copy)]
pub struct PsdCheck {
    /// Verdict of the test.
    pub is_psd: bool,
    /// Smallest eigenvalue, reported regardless of the verdict.
    pub min_eigenvalue: f64,
}

/// Tests positive semidefiniteness via the smallest eigenvalue so the margin
/// is reportable: PSD iff `lambda_min >= -(psd_abs + psd_rel * ||M||_2)`.
pub fn is_psd(op: &HermitianOperator, tol: &ToleranceConfig) -> Result<PsdCheck> {
    let (values, _) = eig::eigh(op.matrix())?;
    let min = values.first().copied().unwrap_or(0.0);
    let spectral = values
        .iter()
        .map(|v| v.abs())
        .fold(0.0f64, f64::max);
    Ok(PsdCheck {
        is_psd: min >= -(tol.psd_abs + tol.psd_rel * spectral),
        min_eigenvalue: min,
    })
}

/// Trace norm: the sum of absolute eigenvalues.
pub fn trace_norm(op: &HermitianOperator) -> Result<f64> {
    let (values, _) = eig::eigh(op.matrix())?;
    Ok(values.iter().map(|v| v.abs()).sum())
}

/// Rectangular complex matrix used internally for facial reductions and
/// support bases (column selections of square eigendecompositions).
#[derive(Debug, Clone)]
pub(crate) struct Rect {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Complex64>, // row-major rows x cols
}

impl Rect {
    /// Builds a rectangle from selected columns of a square matrix.
    pub fn from_columns(m: &ComplexMatrix, cols: &[usize]) -> Rect {
        let rows = m.dim();
        let mut entries = Vec::with_capacity(rows * cols.len());
        for r in 0..rows {
            for &c in cols {
                entries.push(m.get(r, c));
            }
        }
        Rect {
            rows,
            cols: cols.len(),
            entries,
        }
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.entries[r * self.cols + c]
    }

    /// Product `a * self` with square `a` (dimension = self.rows).
    pub fn mul_left_square(&self, a: &ComplexMatrix) -> Rect {
        assert_eq!(a.dim(), self.rows);
        let mut out = vec![Complex64::new(0.0, 0.0); self.rows * self.cols];
        for i in 0..self.rows {
            for k in 0..self.rows {
                let v = a.get(i, k);
                if v.re == 0.0 && v.im == 0.0 {
                    continue;
                }
                for j in 0..self.cols {
                    out[i * self.cols + j] += v * self.get(k, j);
                }
            }
        }
        Rect {
            rows: self.rows,
            cols: self.cols,
            entries: out,
        }
    }

    /// Compression `self† * a * self` of square `a` to the column space.
    pub fn sandwich(&self, a: &ComplexMatrix) -> ComplexMatrix {
        let t = self.mul_left_square(a);
        let mut out = ComplexMatrix::zeros(self.cols);
        for i in 0..self.cols {
            for j in 0..self.cols {
                let mut acc = Complex64::new(0.0, 0.0);
                for r in 0..self.rows {
                    acc += self.get(r, i).conj() * t.get(r, j);
                }
                out.set(i, j, acc);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_has_unit_eigenvalues() {
        let op = HermitianOperator::new(ComplexMatrix::identity(2)).unwrap();
        let eig = hermitian_eig(&op).unwrap();
        assert!((eig.values[0] - 1.0).abs() < 1e-14);
        assert!((eig.values[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn diagonal_eigenvalues_sorted_ascending() {
        let mut m = ComplexMatrix::zeros(2);
        m.set(0, 0, c(3.0, 0.0));
        m.set(1, 1, c(-1.0, 0.0));
        let op = HermitianOperator::new(m).unwrap();
        let eig = hermitian_eig(&op).unwrap();
        assert!((eig.values[0] + 1.0).abs() < 1e-14);
        assert!((eig.values[1] - 3.0).abs() < 1e-14);
    }

    /// Partial transpose of the two-qubit maximally entangled state is
    /// SWAP/2 with spectrum (-1/2, 1/2, 1/2, 1/2).
    #[test]
    fn swap_over_two_spectrum() {
        let mut m = ComplexMatrix::zeros(4);
        m.set(0, 0, c(0.5, 0.0));
        m.set(3, 3, c(0.5, 0.0));
        m.set(1, 2, c(0.5, 0.0));
        m.set(2, 1, c(0.5, 0.0));
        let op = HermitianOperator::new(m).unwrap();
        let eig = hermitian_eig(&op).unwrap();
        let expect = [-0.5, 0.5, 0.5, 0.5];
        for (v, e) in eig.values.iter().zip(expect) {
            assert!((v - e).abs() < 1e-12, "got {v}, expected {e}");
        }
        let tol = ToleranceConfig::default();
        let check = is_psd(&op, &tol).unwrap();
        assert!(!check.is_psd);
        assert!((check.min_eigenvalue + 0.5).abs() < 1e-12);
        assert!((trace_norm(&op).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn trace_norm_of_indefinite_diagonal() {
        let mut m = ComplexMatrix::zeros(2);
        m.set(0, 0, c(2.0, 0.0));
        m.set(1, 1, c(-3.0, 0.0));
        let op = HermitianOperator::new(m).unwrap();
        assert!((trace_norm(&op).unwrap() - 5.0).abs() < 1e-12);
    }

    #[test]
    fn zero_matrix_is_psd_boundary() {
        let op = HermitianOperator::new(ComplexMatrix::zeros(3)).unwrap();
        let check = is_psd(&op, &ToleranceConfig::default()).unwrap();
        assert!(check.is_psd);
        assert_eq!(check.min_eigenvalue, 0.0);
    }

    #[test]
    fn rejects_non_hermitian_input() {
        let mut m = ComplexMatrix::zeros(2);
        m.set(0, 1, c(1.0, 0.0));
        assert!(matches!(
            HermitianOperator::new(m),
            Err(crate::error::Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn rejects_non_finite_entries() {
        let bad = vec![c(f64::NAN, 0.0); 1];
        assert!(ComplexMatrix::from_entries(1, bad).is_err());
    }

    /// Pseudo-random Hermitian matrices: reconstruction residual stays below
    /// the documented bound and eigenvectors are orthonormal.
    #[test]
    fn random_hermitian_reconstruction() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for &n in &[1usize, 2, 3, 5, 8, 13, 21] {
            let raw = ComplexMatrix::from_fn(n, |_, _| {
                c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
            });
            let op = HermitianOperator::new(raw.hermitian_part()).unwrap();
            let eig = hermitian_eig(&op).unwrap();
            let q = &eig.vectors;
            // residual ||M - Q diag Q†||_F
            let mut rec = ComplexMatrix::zeros(n);
            for i in 0..n {
                for j in 0..n {
                    let mut acc = c(0.0, 0.0);
                    for k in 0..n {
                        acc += q.get(i, k) * eig.values[k] * q.get(j, k).conj();
                    }
                    rec.set(i, j, acc);
                }
            }
            let resid = op.matrix().sub(&rec).frobenius_norm();
            let bound = 1e-9 * op.matrix().frobenius_norm().max(1.0);
            assert!(resid <= bound, "n={n}: residual {resid} > {bound}");
            // orthonormality
            let qtq = q.adjoint().matmul(q);
            let err = qtq.sub(&ComplexMatrix::identity(n)).max_abs_entry();
            assert!(err < 1e-10, "n={n}: Q†Q deviates by {err}");
            // ascending order
            for w in eig.values.windows(2) {
                assert!(w[0] <= w[1] + 1e-12);
            }
        }
    }

    #[test]
    fn near_zero_matrix_tests_psd_both_ways() {
        let tol = ToleranceConfig::default();
        let m = ComplexMatrix::from_fn(3, |i, j| {
            if i == j {
                c(1e-12, 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        let op = HermitianOperator::new(m).unwrap();
        let neg = HermitianOperator::new(op.matrix().scale(-1.0)).unwrap();
        assert!(is_psd(&op, &tol).unwrap().is_psd);
        assert!(is_psd(&neg, &tol).unwrap().is_psd);
    }
}
