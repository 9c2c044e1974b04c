//! Primal-dual path-following interior-point solver for Hermitian LMIs.
//!
//! The reduced form is `max b·y` subject to `S(y) = C − Σᵢ yᵢ Aᵢ ⪰ 0` over
//! block-diagonal Hermitian matrices. Directions use Nesterov–Todd scaling
//! with dense normal equations; each iteration takes a Mehrotra-style
//! predictor step (σ probe only — a second-order corrector is inconsistent
//! with the NT-scaled normal equations and stalls near degenerate optima),
//! one symmetric damped step kept inside the wide neighborhood
//! `λ_min(XS) ≥ γ·μ`, and an optional centering pass. [`solve_sdp`] wraps
//! the core in an equality-eliminating presolve.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator_core::eig::eigh;
use crate::operator_core::{is_psd, ComplexMatrix, HermitianOperator, ToleranceConfig};
use crate::optimize::{SdpProblem, SolveReport, SolveStatus};

/// Wide-neighborhood parameter: iterates keep `λ_min(XS) ≥ GAMMA·μ`.
const GAMMA: f64 = 0.05;
/// Fraction of the maximum step taken before backtracking.
const TAU: f64 = 0.9;
/// Duality-measure convergence target.
const DEFAULT_TOL: f64 = 1e-10;
/// Iteration cap.
const DEFAULT_MAX_ITER: usize = 200;
/// Dual objective magnitude treated as divergence (infeasibility flag).
const DIVERGENCE: f64 = 1e8;

// ---------------------------------------------------------------------------
// block-diagonal helpers
// ---------------------------------------------------------------------------

type Blocks = Vec<ComplexMatrix>;

fn bm_herm(a: &Blocks) -> Blocks {
    a.iter().map(|b| b.hermitian_part()).collect()
}

fn bm_add_scaled(a: &Blocks, t: f64, d: &Blocks) -> Blocks {
    a.iter()
        .zip(d)
        .map(|(x, y)| {
            let mut out = x.clone();
            out.axpy(t, y);
            out
        })
        .collect()
}

fn bm_sub(a: &Blocks, b: &Blocks) -> Blocks {
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

/// Σ_blocks tr(a·b).re — the block-diagonal HS inner product.
fn bm_ip(a: &Blocks, b: &Blocks) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.trace_product_re(y)).sum()
}

/// Σᵢ yᵢ Aᵢ.
fn bm_combine(mats: &[Blocks], y: &[f64]) -> Blocks {
    let mut acc: Blocks = mats[0].iter().map(|b| ComplexMatrix::zeros(b.dim())).collect();
    for (yi, a) in y.iter().zip(mats) {
        for (accb, ab) in acc.iter_mut().zip(a) {
            accb.axpy(*yi, ab);
        }
    }
    acc
}

fn bm_total_dim(a: &Blocks) -> usize {
    a.iter().map(|b| b.dim()).sum()
}

// ---------------------------------------------------------------------------
// Hermitian matrix functions via the in-house eigensolver
// ---------------------------------------------------------------------------

/// V f(Λ) V† for a Hermitian matrix.
fn eig_map(m: &ComplexMatrix, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    let (ev, v) = eigh(m)?;
    let n = m.dim();
    let scaled = ComplexMatrix::from_fn(n, |i, k| v.get(i, k) * f(ev[k]));
    Ok(scaled.matmul(&v.adjoint()))
}

fn sqrtm_h(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    eig_map(m, |e| e.max(0.0).sqrt())
}

fn invsqrtm_h(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    eig_map(m, |e| 1.0 / e.max(1e-300).sqrt())
}

fn inv_h(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    eig_map(m, |e| {
        if e.abs() < 1e-300 {
            0.0
        } else {
            1.0 / e
        }
    })
}

/// Smallest eigenvalue, with non-finite entries sanitized to zero.
fn mineig(m: &ComplexMatrix) -> Result<f64> {
    let mut clean = m.hermitian_part();
    let mut dirty = false;
    for i in 0..clean.dim() {
        for j in 0..clean.dim() {
            let z = clean.get(i, j);
            if !z.re.is_finite() || !z.im.is_finite() {
                dirty = true;
            }
        }
    }
    if dirty {
        clean = ComplexMatrix::from_fn(m.dim(), |i, j| {
            let z = clean.get(i, j);
            Complex64::new(
                if z.re.is_finite() { z.re } else { 0.0 },
                if z.im.is_finite() { z.im } else { 0.0 },
            )
        });
    }
    Ok(eigh(&clean)?.0[0])
}

/// Largest α ∈ (0, 1e8] with P + α·D ⪰ 0, assuming P ≻ 0.
fn max_step(p: &ComplexMatrix, d: &ComplexMatrix) -> f64 {
    let pi = match invsqrtm_h(&p.hermitian_part()) {
        Ok(m) => m,
        Err(_) => return 1e-6,
    };
    let inner = pi.matmul(d).matmul(&pi);
    let lam = match mineig(&inner) {
        Ok(v) => v,
        Err(_) => return 1e-6,
    };
    if lam >= -1e-14 {
        1e8
    } else {
        -1.0 / lam
    }
}

fn steps(p: &Blocks, d: &Blocks) -> f64 {
    p.iter()
        .zip(d)
        .map(|(pb, db)| max_step(pb, db))
        .fold(f64::INFINITY, f64::min)
}

/// `(λ_min(XS)/μ, μ)` over all blocks, via X^{1/2} S X^{1/2}.
fn centrality_ratio(x: &Blocks, s: &Blocks) -> Result<(f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut tr = 0.0;
    let mut ntot = 0usize;
    for (xb, sb) in x.iter().zip(s) {
        let xh = sqrtm_h(&xb.hermitian_part())?;
        let p = xh.matmul(sb).matmul(&xh).hermitian_part();
        let ev = eigh(&p)?.0;
        lo = lo.min(ev[0]);
        tr += ev.iter().sum::<f64>();
        ntot += xb.dim();
    }
    let mu = tr / ntot as f64;
    Ok((if mu > 0.0 { lo / mu } else { f64::NEG_INFINITY }, mu))
}

// ---------------------------------------------------------------------------
// dense real Cholesky for the normal equations
// ---------------------------------------------------------------------------

/// Lower-triangular Cholesky factor of a symmetric matrix (row-major),
/// `None` when a pivot fails.
fn cholesky(m: &[f64], n: usize) -> Option<Vec<f64>> {
    let mut l = vec![0.0f64; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut sum = m[i * n + j];
            for k in 0..j {
                sum -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if sum <= 0.0 {
                    return None;
                }
                l[i * n + i] = sum.sqrt();
            } else {
                l[i * n + j] = sum / l[j * n + j];
            }
        }
    }
    Some(l)
}

fn chol_solve(l: &[f64], n: usize, r: &[f64]) -> Vec<f64> {
    let mut z = vec![0.0f64; n];
    for i in 0..n {
        let mut sum = r[i];
        for k in 0..i {
            sum -= l[i * n + k] * z[k];
        }
        z[i] = sum / l[i * n + i];
    }
    let mut out = vec![0.0f64; n];
    for i in (0..n).rev() {
        let mut sum = z[i];
        for k in i + 1..n {
            sum -= l[k * n + i] * out[k];
        }
        out[i] = sum / l[i * n + i];
    }
    out
}

// ---------------------------------------------------------------------------
// KKT system at an iterate
// ---------------------------------------------------------------------------

struct Kkt {
    rp: Vec<f64>,
    rd: Blocks,
    mu: f64,
    w: Blocks,
    sinv: Blocks,
    mmat: Vec<f64>,
    l: Vec<f64>,
    h: Vec<f64>,
}

impl Kkt {
    fn build(x: &Blocks, s: &Blocks, y: &[f64], c: &Blocks, a: &[Blocks], b: &[f64]) -> Result<Self> {
        let m = a.len();
        let ntot = bm_total_dim(c);
        let rp: Vec<f64> = (0..m).map(|i| b[i] - bm_ip(&a[i], x)).collect();
        let rd = bm_herm(&bm_sub(&bm_sub(c, s), &bm_combine(a, y)));
        let mu = bm_ip(x, s) / ntot as f64;
        let mut w = Vec::with_capacity(c.len());
        for (xb, sb) in x.iter().zip(s) {
            let sh = sqrtm_h(&sb.hermitian_part())?;
            let sih = invsqrtm_h(&sb.hermitian_part())?;
            let mid = sqrtm_h(&sh.matmul(xb).matmul(&sh).hermitian_part())?;
            w.push(sih.matmul(&mid).matmul(&sih));
        }
        let sinv: Blocks = s
            .iter()
            .map(|sb| inv_h(&sb.hermitian_part()).map(|m| m.hermitian_part()))
            .collect::<Result<_>>()?;
        // WA_j = W A_j W per block, then M_ij = <A_i, WA_j>
        let wa: Vec<Blocks> = a
            .iter()
            .map(|aj| {
                aj.iter()
                    .zip(&w)
                    .map(|(ab, wb)| wb.matmul(ab).matmul(wb))
                    .collect()
            })
            .collect();
        let mut mmat = vec![0.0f64; m * m];
        for i in 0..m {
            for j in i..m {
                let v = bm_ip(&a[i], &wa[j]);
                mmat[i * m + j] = v;
                mmat[j * m + i] = v;
            }
        }
        let trace_m: f64 = (0..m).map(|i| mmat[i * m + i]).sum();
        let mut ridge = 0.0f64;
        let mut l = None;
        for _ in 0..40 {
            let mut shifted = mmat.clone();
            for i in 0..m {
                shifted[i * m + i] += ridge;
            }
            if let Some(fac) = cholesky(&shifted, m) {
                l = Some(fac);
                break;
            }
            ridge = (1e-13 * trace_m.abs() / m.max(1) as f64)
                .max(4.0 * ridge)
                .max(1e-14);
        }
        let l = l.ok_or_else(|| {
            Error::SearchFailure("normal-equation factorization failed".into())
        })?;
        let wrdw: Blocks = rd
            .iter()
            .zip(&w)
            .map(|(r, wb)| wb.matmul(r).matmul(wb))
            .collect();
        let h: Vec<f64> = (0..m).map(|i| bm_ip(&a[i], &wrdw)).collect();
        Ok(Kkt {
            rp,
            rd,
            mu,
            w,
            sinv,
            mmat,
            l,
            h,
        })
    }

    /// Cholesky solve with one step of iterative refinement.
    fn schur(&self, r: &[f64]) -> Vec<f64> {
        let m = r.len();
        let mut d = chol_solve(&self.l, m, r);
        let mut resid = r.to_vec();
        for i in 0..m {
            for j in 0..m {
                resid[i] -= self.mmat[i * m + j] * d[j];
            }
        }
        let corr = chol_solve(&self.l, m, &resid);
        for i in 0..m {
            d[i] += corr[i];
        }
        d
    }

    /// Newton direction for centering weight σ.
    fn newton(&self, x: &Blocks, a: &[Blocks], sigma: f64) -> (Vec<f64>, Blocks, Blocks) {
        let m = a.len();
        let rc: Blocks = self
            .sinv
            .iter()
            .zip(x)
            .map(|(si, xb)| {
                let mut out = si.scale(sigma * self.mu);
                out.axpy(-1.0, xb);
                out
            })
            .collect();
        let g: Vec<f64> = (0..m).map(|i| bm_ip(&a[i], &rc)).collect();
        let rhs: Vec<f64> = (0..m).map(|i| self.rp[i] - g[i] + self.h[i]).collect();
        let dy = self.schur(&rhs);
        let ds = bm_herm(&bm_sub(&self.rd, &bm_combine(a, &dy)));
        let wdsw: Blocks = ds
            .iter()
            .zip(&self.w)
            .map(|(d, wb)| wb.matmul(d).matmul(wb))
            .collect();
        let dx = bm_herm(&bm_sub(&rc, &wdsw));
        (dy, dx, ds)
    }
}

// ---------------------------------------------------------------------------
// core LMI solver
// ---------------------------------------------------------------------------

/// Raw LMI solution.
pub(crate) struct LmiSolution {
    pub status: SolveStatus,
    pub y: Vec<f64>,
    pub x: Blocks,
    pub mu: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub iterations: usize,
}

/// Solves `max b·y` s.t. `C − Σ yᵢ Aᵢ ⪰ 0` (all blocks Hermitian).
pub(crate) fn solve_lmi(
    c: &Blocks,
    a: &[Blocks],
    b: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<LmiSolution> {
    let mut y = vec![0.0f64; a.len()];
    let mut shift = 0.0f64;
    for blk in c {
        shift = shift.max(-mineig(blk)?);
    }
    shift += 1.0;
    let mut s: Blocks = c
        .iter()
        .map(|blk| {
            let mut out = blk.clone();
            out.axpy(shift, &ComplexMatrix::identity(blk.dim()));
            out
        })
        .collect();
    let mut x: Blocks = c.iter().map(|blk| ComplexMatrix::identity(blk.dim())).collect();
    let mut last = LmiSolution {
        status: SolveStatus::MaxIter,
        y: y.clone(),
        x: x.clone(),
        mu: f64::INFINITY,
        primal_residual: f64::INFINITY,
        dual_residual: f64::INFINITY,
        iterations: 0,
    };
    for it in 0..max_iter {
        let kkt = Kkt::build(&x, &s, &y, c, a, b)?;
        let mu = kkt.mu;
        let rpn = kkt.rp.iter().map(|v| v * v).sum::<f64>().sqrt();
        let rdn = bm_ip(&kkt.rd, &kkt.rd).max(0.0).sqrt();
        if mu < tol && rpn < 1e3 * tol && rdn < 1e3 * tol {
            return Ok(LmiSolution {
                status: SolveStatus::Optimal,
                y,
                x,
                mu,
                primal_residual: rpn,
                dual_residual: rdn,
                iterations: it,
            });
        }
        // 1. predictor: affine probe sets the centering weight
        let aff = kkt.newton(&x, a, 0.0);
        let apa = steps(&x, &aff.1).min(1.0);
        let ada = steps(&s, &aff.2).min(1.0);
        let d = if apa.min(ada) > 0.05 {
            let ntot = bm_total_dim(c) as f64;
            let xa = bm_add_scaled(&x, apa, &aff.1);
            let sa = bm_add_scaled(&s, ada, &aff.2);
            let mu_aff = bm_ip(&xa, &sa) / ntot;
            let sigma = (mu_aff / mu).max(0.0).powi(3).min(1.0);
            kkt.newton(&x, a, sigma)
        } else {
            kkt.newton(&x, a, 0.5)
        };
        // 2. symmetric damped step inside the wide neighborhood
        let amax = steps(&x, &d.1).min(steps(&s, &d.2));
        let mut alpha = (TAU * amax).min(1.0);
        // on exhaustion the old point is kept (direction abandoned)
        for _ in 0..40 {
            let xn = bm_herm(&bm_add_scaled(&x, alpha, &d.1));
            let sn = bm_herm(&bm_add_scaled(&s, alpha, &d.2));
            let (ratio, mun) = centrality_ratio(&xn, &sn)?;
            if mun > 0.0 && ratio >= GAMMA {
                x = xn;
                s = sn;
                for (yi, dyi) in y.iter_mut().zip(&d.0) {
                    *yi += alpha * dyi;
                }
                break;
            }
            alpha /= 2.0;
        }
        // 3. centering pass
        let (r0, mu0) = centrality_ratio(&x, &s)?;
        if r0 < 0.5 {
            let kkt2 = Kkt::build(&x, &s, &y, c, a, b)?;
            let dc = kkt2.newton(&x, a, 1.0);
            let bmax = steps(&x, &dc.1).min(steps(&s, &dc.2));
            let mut bstep = (TAU * bmax).min(1.0);
            for _ in 0..20 {
                let xc = bm_herm(&bm_add_scaled(&x, bstep, &dc.1));
                let sc = bm_herm(&bm_add_scaled(&s, bstep, &dc.2));
                let (rc, muc) = centrality_ratio(&xc, &sc)?;
                // must improve centrality without undoing the predictor's
                // mu progress (second-order inflation guard)
                if muc > 0.0 && rc > r0 && muc <= 1.02 * mu0 {
                    x = xc;
                    s = sc;
                    for (yi, dyi) in y.iter_mut().zip(&dc.0) {
                        *yi += bstep * dyi;
                    }
                    break;
                }
                bstep /= 2.0;
            }
        }
        last = LmiSolution {
            status: SolveStatus::MaxIter,
            y: y.clone(),
            x: x.clone(),
            mu,
            primal_residual: rpn,
            dual_residual: rdn,
            iterations: it,
        };
    }
    Ok(last)
}

fn bm_add_scaled_blocks(a: &Blocks, t: f64, d: &Blocks) -> Blocks {
    bm_add_scaled(a, t, d)
}

// ---------------------------------------------------------------------------
// presolve: equality elimination, then the LMI core
// ---------------------------------------------------------------------------

/// Particular solution and nullspace basis of `E x = f` via the Gram matrix
/// EᵀE (relative eigenvalue cut 1e-12). Returns `None` when the system is
/// inconsistent.
fn eliminate_equalities(
    eq_rows: &[Vec<f64>],
    eq_rhs: &[f64],
    n: usize,
) -> Result<Option<(Vec<f64>, Vec<Vec<f64>>)>> {
    if eq_rows.is_empty() {
        let null: Vec<Vec<f64>> = (0..n)
            .map(|k| (0..n).map(|i| if i == k { 1.0 } else { 0.0 }).collect())
            .collect();
        return Ok(Some((vec![0.0; n], null)));
    }
    // Gram G = EᵀE and ETf = Eᵀf
    let mut gram = ComplexMatrix::zeros(n);
    let mut etf = vec![0.0f64; n];
    for (row, rhs) in eq_rows.iter().zip(eq_rhs) {
        for i in 0..n {
            if row[i] == 0.0 {
                continue;
            }
            etf[i] += row[i] * rhs;
            for j in 0..n {
                let cur = gram.get(i, j);
                gram.set(i, j, cur + Complex64::new(row[i] * row[j], 0.0));
            }
        }
    }
    let (ev, v) = eigh(&gram)?;
    let cut = ev.last().copied().unwrap_or(0.0).max(0.0) * 1e-12;
    // pseudo-inverse particular solution y0 = V diag(1/ev) Vᵀ Eᵀ f
    let mut y0 = vec![0.0f64; n];
    for k in 0..n {
        if ev[k] <= cut {
            continue;
        }
        let proj: f64 = (0..n).map(|i| v.get(i, k).re * etf[i]).sum();
        for i in 0..n {
            y0[i] += v.get(i, k).re * proj / ev[k];
        }
    }
    // consistency check
    let mut scale: f64 = 1.0;
    for rhs in eq_rhs {
        scale = scale.max(rhs.abs());
    }
    for (row, rhs) in eq_rows.iter().zip(eq_rhs) {
        let dot: f64 = row.iter().zip(&y0).map(|(a, b)| a * b).sum();
        if (dot - rhs).abs() > 1e-8 * scale {
            return Ok(None);
        }
    }
    let null: Vec<Vec<f64>> = (0..n)
        .filter(|&k| ev[k] <= cut)
        .map(|k| (0..n).map(|i| v.get(i, k).re).collect())
        .collect();
    Ok(Some((y0, null)))
}

/// Solves an [`SdpProblem`] (maximization). Equalities are eliminated onto
/// their nullspace, the reduced LMI is handed to the path-following core,
/// and the report carries from-scratch block margins at the returned point.
pub fn solve_sdp(problem: &SdpProblem) -> Result<SolveReport> {
    solve_sdp_with_tol(problem, DEFAULT_TOL, DEFAULT_MAX_ITER)
}

/// [`solve_sdp`] with explicit duality-measure tolerance and iteration cap.
pub fn solve_sdp_with_tol(
    problem: &SdpProblem,
    tol: f64,
    max_iter: usize,
) -> Result<SolveReport> {
    problem.validate()?;
    let n = problem.num_vars();
    let tols = ToleranceConfig::default();
    let reduced = eliminate_equalities(&problem.eq_rows, &problem.eq_rhs, n)?;
    let (y0, null) = match reduced {
        Some(pair) => pair,
        None => {
            return Ok(SolveReport {
                status: SolveStatus::Infeasible,
                x: vec![0.0; n],
                value: f64::NEG_INFINITY,
                dual_bound: f64::NEG_INFINITY,
                gap: 0.0,
                block_margins: Vec::new(),
                rational_certified: false,
                iterations: 0,
            })
        }
    };
    let m = null.len();
    // C_k = block at y0; A_ik = -(directional derivative along null[i])
    let c_blocks: Blocks = problem
        .blocks
        .iter()
        .map(|blk| blk.eval(&y0).hermitian_part())
        .collect();
    let mut a_mats: Vec<Blocks> = Vec::with_capacity(m);
    for dir in &null {
        let one: Blocks = problem
            .blocks
            .iter()
            .map(|blk| {
                let mut acc = ComplexMatrix::zeros(blk.dim());
                for (coef, f) in dir.iter().zip(&blk.mats[1..]) {
                    acc.axpy(-coef, f);
                }
                acc.hermitian_part()
            })
            .collect();
        a_mats.push(one);
    }
    let b_red: Vec<f64> = null
        .iter()
        .map(|dir| dir.iter().zip(&problem.objective).map(|(a, c)| a * c).sum())
        .collect();
    let offset: f64 = y0.iter().zip(&problem.objective).map(|(a, c)| a * c).sum();

    let (x_full, dual_bound, iterations, raw_status) = if m == 0 {
        (y0.clone(), offset, 0, SolveStatus::Optimal)
    } else {
        let sol = solve_lmi(&c_blocks, &a_mats, &b_red, tol, max_iter)?;
        let mut xf = y0.clone();
        for (zi, dir) in sol.y.iter().zip(&null) {
            for (xi, di) in xf.iter_mut().zip(dir) {
                *xi += zi * di;
            }
        }
        let bound = bm_ip(&c_blocks, &sol.x) + offset;
        (xf, bound, sol.iterations, sol.status)
    };
    let value: f64 = x_full
        .iter()
        .zip(&problem.objective)
        .map(|(a, c)| a * c)
        .sum();
    // from-scratch margins at the returned point
    let mut block_margins = Vec::with_capacity(problem.blocks.len());
    let mut margins_ok = true;
    for blk in &problem.blocks {
        let evald = HermitianOperator::new(blk.eval(&x_full).hermitian_part())?;
        let check = is_psd(&evald, &tols)?;
        block_margins.push(check.min_eigenvalue);
        margins_ok &= check.is_psd;
    }
    let gap = dual_bound - value;
    let status = if dual_bound.abs() > DIVERGENCE {
        SolveStatus::Infeasible
    } else if raw_status == SolveStatus::Optimal
        && margins_ok
        && gap.abs() <= tols.gap_tol
    {
        SolveStatus::Optimal
    } else {
        SolveStatus::MaxIter
    };
    Ok(SolveReport {
        status,
        x: x_full,
        value,
        dual_bound,
        gap,
        block_margins,
        rational_certified: false,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimize::AffineBlock;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn mat(dim: usize, entries: &[(usize, usize, Complex64)]) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(dim);
        for &(i, j, z) in entries {
            m.set(i, j, z);
        }
        m
    }

    #[test]
    fn feasibility_only_block_is_optimal() {
        // I + x·0 >= 0, maximize 0: any x optimal
        let p = SdpProblem {
            objective: vec![0.0],
            eq_rows: vec![],
            eq_rhs: vec![],
            blocks: vec![AffineBlock {
                mats: vec![ComplexMatrix::identity(2), ComplexMatrix::zeros(2)],
            }],
        };
        let rep = solve_sdp(&p).unwrap();
        assert_eq!(rep.status, SolveStatus::Optimal);
        assert!(rep.block_margins[0] > 0.5);
    }

    #[test]
    fn scalar_cap_reaches_bound() {
        // max x s.t. 3 - x >= 0
        let p = SdpProblem {
            objective: vec![1.0],
            eq_rows: vec![],
            eq_rhs: vec![],
            blocks: vec![AffineBlock {
                mats: vec![
                    mat(1, &[(0, 0, c(3.0, 0.0))]),
                    mat(1, &[(0, 0, c(-1.0, 0.0))]),
                ],
            }],
        };
        let rep = solve_sdp(&p).unwrap();
        assert_eq!(rep.status, SolveStatus::Optimal);
        assert!((rep.value - 3.0).abs() < 1e-7, "value {}", rep.value);
        assert!(rep.dual_bound >= rep.value - 1e-7);
    }

    #[test]
    fn off_diagonal_coupling_caps_at_one() {
        // max x s.t. [[1, x],[x, 1]] >= 0  -> x* = 1
        let p = SdpProblem {
            objective: vec![1.0],
            eq_rows: vec![],
            eq_rhs: vec![],
            blocks: vec![AffineBlock {
                mats: vec![
                    ComplexMatrix::identity(2),
                    mat(2, &[(0, 1, c(1.0, 0.0)), (1, 0, c(1.0, 0.0))]),
                ],
            }],
        };
        let rep = solve_sdp(&p).unwrap();
        assert_eq!(rep.status, SolveStatus::Optimal);
        assert!((rep.value - 1.0).abs() < 1e-6, "value {}", rep.value);
    }

    #[test]
    fn complex_coupling_caps_at_one() {
        // max x s.t. I + x·Y >= 0 with Y = [[0,-i],[i,0]] -> x* = 1
        let p = SdpProblem {
            objective: vec![-1.0],
            eq_rows: vec![],
            eq_rhs: vec![],
            blocks: vec![AffineBlock {
                mats: vec![
                    ComplexMatrix::identity(2),
                    mat(2, &[(0, 1, c(0.0, -1.0)), (1, 0, c(0.0, 1.0))]),
                ],
            }],
        };
        let rep = solve_sdp(&p).unwrap();
        assert_eq!(rep.status, SolveStatus::Optimal);
        assert!((rep.value - 1.0).abs() < 1e-6, "value {}", rep.value);
    }

    #[test]
    fn equality_presolve_reduces_and_solves() {
        // max x0 with x0 + x1 = 1 and diag(1 - x0, 1 + x1) >= 0 -> x = (1, 0)
        let p = SdpProblem {
            objective: vec![1.0, 0.0],
            eq_rows: vec![vec![1.0, 1.0]],
            eq_rhs: vec![1.0],
            blocks: vec![AffineBlock {
                mats: vec![
                    ComplexMatrix::identity(2),
                    mat(2, &[(0, 0, c(-1.0, 0.0))]),
                    mat(2, &[(1, 1, c(1.0, 0.0))]),
                ],
            }],
        };
        let rep = solve_sdp(&p).unwrap();
        assert_eq!(rep.status, SolveStatus::Optimal);
        assert!((rep.value - 1.0).abs() < 1e-6);
        assert!((rep.x[0] - 1.0).abs() < 1e-5);
        assert!(rep.x[1].abs() < 1e-5);
        // equality holds exactly on the reduced subspace
        assert!((rep.x[0] + rep.x[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn inconsistent_equalities_flag_infeasible() {
        let p = SdpProblem {
            objective: vec![1.0],
            eq_rows: vec![vec![1.0], vec![1.0]],
            eq_rhs: vec![0.0, 1.0],
            blocks: vec![AffineBlock {
                mats: vec![ComplexMatrix::identity(1), ComplexMatrix::zeros(1)],
            }],
        };
        let rep = solve_sdp(&p).unwrap();
        assert_eq!(rep.status, SolveStatus::Infeasible);
    }

    #[test]
    fn fully_pinned_variables_skip_the_solver() {
        // x = 2 forced by equalities; block 3 - x >= 0 holds
        let p = SdpProblem {
            objective: vec![5.0],
            eq_rows: vec![vec![1.0]],
            eq_rhs: vec![2.0],
            blocks: vec![AffineBlock {
                mats: vec![
                    mat(1, &[(0, 0, c(3.0, 0.0))]),
                    mat(1, &[(0, 0, c(-1.0, 0.0))]),
                ],
            }],
        };
        let rep = solve_sdp(&p).unwrap();
        assert_eq!(rep.status, SolveStatus::Optimal);
        assert!((rep.value - 10.0).abs() < 1e-12);
        assert_eq!(rep.iterations, 0);
    }

    #[test]
    fn two_block_problem_with_competing_caps() {
        // max x + y s.t. 2 - x >= 0, [[1, y],[y, 1]] >= 0 -> (2, 1), value 3
        let p = SdpProblem {
            objective: vec![1.0, 1.0],
            eq_rows: vec![],
            eq_rhs: vec![],
            blocks: vec![
                AffineBlock {
                    mats: vec![
                        mat(1, &[(0, 0, c(2.0, 0.0))]),
                        mat(1, &[(0, 0, c(-1.0, 0.0))]),
                        ComplexMatrix::zeros(1),
                    ],
                },
                AffineBlock {
                    mats: vec![
                        ComplexMatrix::identity(2),
                        ComplexMatrix::zeros(2),
                        mat(2, &[(0, 1, c(1.0, 0.0)), (1, 0, c(1.0, 0.0))]),
                    ],
                },
            ],
        };
        let rep = solve_sdp(&p).unwrap();
        assert_eq!(rep.status, SolveStatus::Optimal);
        assert!((rep.value - 3.0).abs() < 1e-6, "value {}", rep.value);
        assert!(rep.gap.abs() <= 1e-7);
        assert!(rep.block_margins.iter().all(|&m| m > -1e-9));
    }
}
