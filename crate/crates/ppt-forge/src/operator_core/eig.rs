//! Hermitian eigendecomposition.
//!
//! Two stages, both in-house per the crate's no-LAPACK policy:
//!
//! 1. Householder tridiagonalization with complex reflectors, followed by a
//!    diagonal phase rotation that makes the subdiagonal real;
//! 2. implicit-shift QL iteration on the real symmetric tridiagonal matrix
//!    (the classic `tql2` scheme), with the plane rotations accumulated into
//!    the complex basis so eigenvectors come out alongside eigenvalues.
//!
//! Eigenvalues are returned in ascending order; column `k` of the vector
//! matrix is the eigenvector for `values[k]`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator_core::{ComplexMatrix, HermitianOperator};

/// Maximum QL sweeps per eigenvalue before giving up.
const MAX_QL_ITERATIONS: usize = 50;

/// Eigendecomposition of a Hermitian operator.
#[derive(Debug, Clone)]
pub struct Eigendecomposition {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Unitary matrix whose columns are the matching eigenvectors.
    pub vectors: ComplexMatrix,
}

/// Full eigendecomposition of a Hermitian operator.
pub fn hermitian_eig(op: &HermitianOperator) -> Result<Eigendecomposition> {
    let (values, vectors) = eigh(op.matrix())?;
    Ok(Eigendecomposition { values, vectors })
}

/// Internal eigendecomposition entry point for matrices already known to be
/// Hermitian (solver iterates symmetrize explicitly before calling).
pub(crate) fn eigh(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let n = m.dim();
    let (mut d, mut e, mut q) = tridiagonalize(m);

    // Rotate phases so the subdiagonal is real non-negative: with
    // D = diag(1, p_1, p_1 p_2, ...) built from the subdiagonal phases,
    // D† T D is real tridiagonal and the eigenbasis transforms as Q D.
    let mut phase = Complex64::new(1.0, 0.0);
    let mut er = vec![0.0f64; n];
    for k in 0..n.saturating_sub(1) {
        let sub = e[k];
        let mag = sub.norm();
        if mag > 0.0 {
            phase *= sub / mag;
        }
        er[k] = mag;
        for r in 0..n {
            let v = q.get(r, k + 1) * phase;
            q.set(r, k + 1, v);
        }
    }

    ql_implicit_shift(&mut d, &mut er, &mut q, n)?;

    // Sort ascending, permuting eigenvector columns to match.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let mut vectors = ComplexMatrix::zeros(n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for r in 0..n {
            vectors.set(r, new_col, q.get(r, old_col));
        }
    }
    Ok((values, vectors))
}

/// Reduces a Hermitian matrix to tridiagonal form with complex Householder
/// reflectors; returns the real diagonal, complex subdiagonal (entry `k`
/// couples rows `k` and `k+1`), and the accumulated unitary.
fn tridiagonalize(m: &ComplexMatrix) -> (Vec<f64>, Vec<Complex64>, ComplexMatrix) {
    let n = m.dim();
    let mut a = m.clone();
    let mut q = ComplexMatrix::identity(n);
    let mut e = vec![Complex64::new(0.0, 0.0); n];

    for k in 0..n.saturating_sub(2) {
        // x = a[k+1.., k], the column below the diagonal.
        let alpha = a.get(k + 1, k);
        let mut norm_sq = 0.0f64;
        for i in k + 1..n {
            norm_sq += a.get(i, k).norm_sqr();
        }
        let norm = norm_sq.sqrt();
        if norm == 0.0 {
            e[k] = Complex64::new(0.0, 0.0);
            continue;
        }
        // beta = -phase(alpha) * ||x||; v = x - beta e1 maximizes |v[0]|.
        let phase = if alpha.norm() > 0.0 {
            alpha / alpha.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let beta = -phase * norm;
        let len = n - k - 1;
        let mut v = vec![Complex64::new(0.0, 0.0); len];
        v[0] = alpha - beta;
        for i in 1..len {
            v[i] = a.get(k + 1 + i, k);
        }
        let vnorm_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm_sq == 0.0 {
            e[k] = alpha;
            continue;
        }
        let tau = 2.0 / vnorm_sq;

        // Hermitian rank-2 update of the trailing block:
        // p = tau * A22 v, w = p - (tau v†p / 2) v, A22 -= v w† + w v†.
        let mut p = vec![Complex64::new(0.0, 0.0); len];
        for i in 0..len {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..len {
                acc += a.get(k + 1 + i, k + 1 + j) * v[j];
            }
            p[i] = acc * tau;
        }
        let vdp: Complex64 = v.iter().zip(&p).map(|(vi, pi)| vi.conj() * pi).sum();
        let kappa = vdp * (tau * 0.5);
        let w: Vec<Complex64> = p
            .iter()
            .zip(&v)
            .map(|(pi, vi)| pi - kappa * vi)
            .collect();
        for i in 0..len {
            for j in 0..len {
                let upd = v[i] * w[j].conj() + w[i] * v[j].conj();
                let cur = a.get(k + 1 + i, k + 1 + j);
                a.set(k + 1 + i, k + 1 + j, cur - upd);
            }
        }
        e[k] = beta;

        // Accumulate Q <- Q * H with H = I - tau v v† acting on cols k+1.. .
        for r in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..len {
                acc += q.get(r, k + 1 + j) * v[j];
            }
            let acc = acc * tau;
            for j in 0..len {
                let cur = q.get(r, k + 1 + j);
                q.set(r, k + 1 + j, cur - acc * v[j].conj());
            }
        }
    }
    if n >= 2 {
        e[n - 2] = a.get(n - 1, n - 2);
    }
    let d: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
    (d, e, q)
}

/// Implicit-shift QL on a real symmetric tridiagonal matrix, rotations
/// applied to the complex column basis `q`.
fn ql_implicit_shift(
    d: &mut [f64],
    e: &mut [f64],
    q: &mut ComplexMatrix,
    n: usize,
) -> Result<()> {
    if n <= 1 {
        return Ok(());
    }
    // e[i] couples d[i] and d[i+1]; e[n-1] is a zero sentinel.
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0usize;
        loop {
            // Find the first negligible subdiagonal at or beyond l.
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_ITERATIONS {
                return Err(Error::EigNonConvergence {
                    dim: n,
                    iterations: MAX_QL_ITERATIONS,
                });
            }
            // Wilkinson-style shift from the leading 2x2.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0f64, 1.0f64);
            let mut p = 0.0f64;
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    // Deflate: recover and restart this eigenvalue.
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                // Rotate eigenvector columns i and i+1.
                for row in 0..q.dim() {
                    let fi = q.get(row, i + 1);
                    let gi = q.get(row, i);
                    q.set(row, i + 1, gi * s + fi * c);
                    q.set(row, i, gi * c - fi * s);
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn pauli_y_spectrum() {
        let mut m = ComplexMatrix::zeros(2);
        m.set(0, 1, c(0.0, -1.0));
        m.set(1, 0, c(0.0, 1.0));
        let (vals, vecs) = eigh(&m).unwrap();
        assert!((vals[0] + 1.0).abs() < 1e-14);
        assert!((vals[1] - 1.0).abs() < 1e-14);
        // Verify the eigenvector equation M v = lambda v for each column.
        for k in 0..2 {
            for r in 0..2 {
                let mut acc = c(0.0, 0.0);
                for j in 0..2 {
                    acc += m.get(r, j) * vecs.get(j, k);
                }
                let err = (acc - vecs.get(r, k) * vals[k]).norm();
                assert!(err < 1e-14, "column {k} row {r}: {err}");
            }
        }
    }

    #[test]
    fn clustered_eigenvalues_converge() {
        // Diagonal with a tight cluster plus small complex coupling.
        let n = 6;
        let diag = [1.0, 1.0 + 1e-9, 1.0 + 2e-9, 2.0, 3.0, 3.0];
        let mut m = ComplexMatrix::zeros(n);
        for i in 0..n {
            m.set(i, i, c(diag[i], 0.0));
        }
        for i in 0..n - 1 {
            m.set(i, i + 1, c(1e-4, 2e-4));
            m.set(i + 1, i, c(1e-4, -2e-4));
        }
        let (vals, vecs) = eigh(&m).unwrap();
        // Trace is preserved.
        let sum: f64 = vals.iter().sum();
        assert!((sum - diag.iter().sum::<f64>()).abs() < 1e-10);
        // Residual check.
        for k in 0..n {
            for r in 0..n {
                let mut acc = c(0.0, 0.0);
                for j in 0..n {
                    acc += m.get(r, j) * vecs.get(j, k);
                }
                let err = (acc - vecs.get(r, k) * vals[k]).norm();
                assert!(err < 1e-10);
            }
        }
    }

    #[test]
    fn one_by_one_matrix() {
        let mut m = ComplexMatrix::zeros(1);
        m.set(0, 0, c(-7.5, 0.0));
        let (vals, vecs) = eigh(&m).unwrap();
        assert_eq!(vals, vec![-7.5]);
        assert!((vecs.get(0, 0).norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn already_diagonal_keeps_vectors_axis_aligned() {
        let mut m = ComplexMatrix::zeros(3);
        m.set(0, 0, c(2.0, 0.0));
        m.set(1, 1, c(0.5, 0.0));
        m.set(2, 2, c(1.0, 0.0));
        let (vals, vecs) = eigh(&m).unwrap();
        assert!((vals[0] - 0.5).abs() < 1e-15);
        assert!((vals[1] - 1.0).abs() < 1e-15);
        assert!((vals[2] - 2.0).abs() < 1e-15);
        // Each column should be a standard basis vector up to phase.
        for k in 0..3 {
            let col: Vec<f64> = (0..3).map(|r| vecs.get(r, k).norm()).collect();
            let big = col.iter().filter(|&&v| v > 0.5).count();
            assert_eq!(big, 1);
        }
    }
}
