//! Dense two-phase simplex for the fully reduced (bipartite) programs.
//!
//! Problems are first brought to standard form `min c·x, Ax = b, x ≥ 0`
//! (free variables split, bounded variables shifted, inequalities slacked),
//! then solved with Bland's anti-cycling rule throughout. The final basis of
//! an optimal solve is re-verified in exact rational arithmetic; the
//! [`SolveReport::rational_certified`] flag records whether that
//! recomputation confirmed feasibility, optimality, and the f64 solution.

use crate::error::{Error, Result};
use crate::optimize::rational::certify_basis;
use crate::optimize::{LpProblem, SolveReport, SolveStatus};

/// Pivot tolerance for entering/leaving decisions.
const PIVOT_TOL: f64 = 1e-9;
/// Iteration cap (generous; in-scope programs have tens of rows).
const MAX_PIVOTS: usize = 10_000;

/// Standard-form image of an [`LpProblem`]: `min c·x, Ax = b, x ≥ 0`.
pub(crate) struct StandardLp {
    pub a: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
}

/// How an original variable maps into standard-form columns.
enum VarMap {
    /// `x = col + offset`
    Shifted { col: usize, offset: f64 },
    /// `x = offset − col`
    Flipped { col: usize, offset: f64 },
    /// `x = pos − neg`
    Split { pos: usize, neg: usize },
}

struct Reduction {
    std: StandardLp,
    maps: Vec<VarMap>,
    /// Constant added to the (maximized) objective by the substitutions.
    obj_offset: f64,
}

/// Builds the standard form. The original problem maximizes; the standard
/// form minimizes the negated objective.
fn reduce(p: &LpProblem) -> Reduction {
    let n = p.num_vars();
    let mut maps = Vec::with_capacity(n);
    let mut ncols = 0usize;
    let mut extra_ineq: Vec<(usize, f64)> = Vec::new(); // (orig var, width)
    for (i, &(lo, hi)) in p.bounds.iter().enumerate() {
        match (lo, hi) {
            (Some(l), Some(h)) => {
                maps.push(VarMap::Shifted { col: ncols, offset: l });
                extra_ineq.push((i, h - l));
                ncols += 1;
            }
            (Some(l), None) => {
                maps.push(VarMap::Shifted { col: ncols, offset: l });
                ncols += 1;
            }
            (None, Some(h)) => {
                maps.push(VarMap::Flipped { col: ncols, offset: h });
                ncols += 1;
            }
            (None, None) => {
                maps.push(VarMap::Split { pos: ncols, neg: ncols + 1 });
                ncols += 2;
            }
        }
    }
    let num_ineq = p.ineq_rows.len() + extra_ineq.len();
    let num_rows = num_ineq + p.eq_rows.len();
    let total_cols = ncols + num_ineq; // slacks
    let mut a = vec![vec![0.0f64; total_cols]; num_rows];
    let mut b = vec![0.0f64; num_rows];
    let mut c = vec![0.0f64; total_cols];
    let mut obj_offset = 0.0f64;
    // objective: max Σ cᵢ xᵢ → min Σ (−cᵢ)(mapped)
    for (i, &ci) in p.objective.iter().enumerate() {
        match maps[i] {
            VarMap::Shifted { col, offset } => {
                c[col] -= ci;
                obj_offset += ci * offset;
            }
            VarMap::Flipped { col, offset } => {
                c[col] += ci;
                obj_offset += ci * offset;
            }
            VarMap::Split { pos, neg } => {
                c[pos] -= ci;
                c[neg] += ci;
            }
        }
    }
    let mut fill_row = |row: &mut Vec<f64>, rhs: &mut f64, coeffs: &[f64], bound: f64| {
        *rhs = bound;
        for (i, &w) in coeffs.iter().enumerate() {
            match maps[i] {
                VarMap::Shifted { col, offset } => {
                    row[col] += w;
                    *rhs -= w * offset;
                }
                VarMap::Flipped { col, offset } => {
                    row[col] -= w;
                    *rhs -= w * offset;
                }
                VarMap::Split { pos, neg } => {
                    row[pos] += w;
                    row[neg] -= w;
                }
            }
        }
    };
    let mut r = 0usize;
    for (coeffs, &rhs) in p.ineq_rows.iter().zip(&p.ineq_rhs) {
        fill_row(&mut a[r], &mut b[r], coeffs, rhs);
        a[r][ncols + r] = 1.0;
        r += 1;
    }
    for &(var, width) in &extra_ineq {
        let mut coeffs = vec![0.0; n];
        coeffs[var] = 1.0;
        fill_row(&mut a[r], &mut b[r], &coeffs, width + lower_of(p, var));
        a[r][ncols + r] = 1.0;
        r += 1;
    }
    for (coeffs, &rhs) in p.eq_rows.iter().zip(&p.eq_rhs) {
        fill_row(&mut a[r], &mut b[r], coeffs, rhs);
        r += 1;
    }
    // make all right-hand sides nonnegative
    for i in 0..num_rows {
        if b[i] < 0.0 {
            b[i] = -b[i];
            for v in a[i].iter_mut() {
                *v = -*v;
            }
        }
    }
    Reduction {
        std: StandardLp { a, b, c },
        maps,
        obj_offset,
    }
}

fn lower_of(p: &LpProblem, var: usize) -> f64 {
    p.bounds[var].0.unwrap_or(0.0)
}

enum PivotOutcome {
    Optimal,
    Unbounded,
    IterationCap,
}

/// Runs Bland-rule simplex on the tableau in place. `tableau` holds B⁻¹A
/// with the rhs as the final column; `basis[i]` is the basic column of row
/// `i`; `cost` is the objective being minimized over all columns.
fn run_simplex(
    tableau: &mut [Vec<f64>],
    basis: &mut [usize],
    cost: &[f64],
) -> (PivotOutcome, usize) {
    let m = tableau.len();
    let ncols = cost.len();
    for pivots in 0..MAX_PIVOTS {
        // reduced costs r_j = c_j − Σ_i c_{basis[i]} T[i][j]
        let mut entering = None;
        for j in 0..ncols {
            let mut rj = cost[j];
            for i in 0..m {
                rj -= cost[basis[i]] * tableau[i][j];
            }
            if rj < -PIVOT_TOL {
                entering = Some(j);
                break; // Bland: smallest improving index
            }
        }
        let Some(j) = entering else {
            return (PivotOutcome::Optimal, pivots);
        };
        // ratio test; ties broken by smallest basic-variable index (Bland)
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..m {
            let t = tableau[i][j];
            if t > PIVOT_TOL {
                let ratio = tableau[i][ncols] / t;
                let better = match leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < lr - PIVOT_TOL
                            || (ratio <= lr + PIVOT_TOL && basis[i] < basis[li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((pivot_row, _)) = leave else {
            return (PivotOutcome::Unbounded, pivots);
        };
        pivot(tableau, pivot_row, j);
        basis[pivot_row] = j;
    }
    (PivotOutcome::IterationCap, MAX_PIVOTS)
}

fn pivot(tableau: &mut [Vec<f64>], row: usize, col: usize) {
    let m = tableau.len();
    let w = tableau[row][col];
    for v in tableau[row].iter_mut() {
        *v /= w;
    }
    for i in 0..m {
        if i == row {
            continue;
        }
        let f = tableau[i][col];
        if f == 0.0 {
            continue;
        }
        let src = tableau[row].clone();
        for (dst, s) in tableau[i].iter_mut().zip(&src) {
            *dst -= f * s;
        }
    }
}

/// Solves an [`LpProblem`] (maximization) with two-phase simplex.
pub fn solve_lp(p: &LpProblem) -> Result<SolveReport> {
    p.validate()?;
    let red = reduce(p);
    let m = red.std.b.len();
    let n = red.std.c.len();
    // phase 1: artificials on every row, minimize their sum
    let total = n + m;
    let mut tableau: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            let mut row = Vec::with_capacity(total + 1);
            row.extend_from_slice(&red.std.a[i]);
            row.extend((0..m).map(|k| if k == i { 1.0 } else { 0.0 }));
            row.push(red.std.b[i]);
            row
        })
        .collect();
    let mut basis: Vec<usize> = (n..n + m).collect();
    let mut phase1_cost = vec![0.0f64; total];
    for c in phase1_cost.iter_mut().skip(n) {
        *c = 1.0;
    }
    let (outcome1, pivots1) = run_simplex(&mut tableau, &mut basis, &phase1_cost);
    match outcome1 {
        PivotOutcome::Optimal => {}
        PivotOutcome::Unbounded => {
            return Err(Error::SearchFailure(
                "phase-1 simplex reported unbounded".into(),
            ))
        }
        PivotOutcome::IterationCap => {
            return Ok(report_status(SolveStatus::MaxIter, p));
        }
    }
    let phase1_value: f64 = (0..m)
        .map(|i| phase1_cost[basis[i]] * tableau[i][total])
        .sum();
    if phase1_value > 1e-7 {
        return Ok(report_status(SolveStatus::Infeasible, p));
    }
    // drive surviving artificials out of the basis; drop redundant rows
    let mut keep_rows = Vec::new();
    for i in 0..m {
        if basis[i] >= n {
            // a zero row over the real columns is a redundant constraint
            if let Some(j) = (0..n).find(|&j| tableau[i][j].abs() > PIVOT_TOL) {
                pivot(&mut tableau, i, j);
                basis[i] = j;
                keep_rows.push(i);
            }
        } else {
            keep_rows.push(i);
        }
    }
    let mut t2: Vec<Vec<f64>> = keep_rows
        .iter()
        .map(|&i| {
            let mut row = tableau[i][..n].to_vec();
            row.push(tableau[i][total]);
            row
        })
        .collect();
    let mut basis2: Vec<usize> = keep_rows.iter().map(|&i| basis[i]).collect();
    // phase 2
    let (outcome, pivots2) = run_simplex(&mut t2, &mut basis2, &red.std.c);
    let status = match outcome {
        PivotOutcome::Optimal => SolveStatus::Optimal,
        PivotOutcome::Unbounded => SolveStatus::Unbounded,
        PivotOutcome::IterationCap => SolveStatus::MaxIter,
    };
    if status != SolveStatus::Optimal {
        return Ok(report_status(status, p));
    }
    // read off standard-form solution
    let mut x_std = vec![0.0f64; n];
    for (i, &bi) in basis2.iter().enumerate() {
        x_std[bi] = t2[i][n];
    }
    let mut x = vec![0.0f64; p.num_vars()];
    for (i, map) in red.maps.iter().enumerate() {
        x[i] = match *map {
            VarMap::Shifted { col, offset } => x_std[col] + offset,
            VarMap::Flipped { col, offset } => offset - x_std[col],
            VarMap::Split { pos, neg } => x_std[pos] - x_std[neg],
        };
    }
    let value: f64 = x.iter().zip(&p.objective).map(|(a, c)| a * c).sum();
    let std_value: f64 = x_std.iter().zip(&red.std.c).map(|(a, c)| a * c).sum();
    debug_assert!((value - (red.obj_offset - std_value)).abs() < 1e-6 * value.abs().max(1.0));
    let certified = certify_basis(&red.std, &keep_rows, &basis2, &x_std);
    Ok(SolveReport {
        status: SolveStatus::Optimal,
        x,
        value,
        dual_bound: value,
        gap: 0.0,
        block_margins: Vec::new(),
        rational_certified: certified,
        iterations: pivots1 + pivots2,
    })
}

fn report_status(status: SolveStatus, p: &LpProblem) -> SolveReport {
    SolveReport {
        status,
        x: vec![0.0; p.num_vars()],
        value: f64::NEG_INFINITY,
        dual_bound: f64::INFINITY,
        gap: f64::INFINITY,
        block_margins: Vec::new(),
        rational_certified: false,
        iterations: 0,
    }
}
