//! Exact rational recheck of a final simplex basis.
//!
//! Every f64 in the standard-form data converts exactly to a dyadic
//! rational, so the final basis can be re-verified without rounding:
//! solve `B x_B = b` for feasibility, solve `Bᵀ y = c_B` and check all
//! reduced costs `c_j − y·A_j ≥ 0` for optimality, and compare the exact
//! basic solution against the floating-point one.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::optimize::simplex::StandardLp;

/// Tolerance for the f64-vs-exact comparison.
const MATCH_TOL: f64 = 1e-12;
/// Exact-arithmetic slack on basic-variable feasibility. The standard-form
/// data are themselves f64-rounded, so a degenerate vertex can sit an
/// ulp-sized step outside the exact cone; anything beyond noise level still
/// fails.
const FEAS_EPS: f64 = 1e-11;
/// Exact-arithmetic slack on reduced costs, matching the simplex pivot
/// tolerance: a cost more negative than this means the solve truly stopped
/// short of optimality.
const COST_EPS: f64 = 1e-9;

fn to_rat(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

/// Gaussian elimination solve of a square rational system; `None` when the
/// matrix is singular.
fn solve_exact(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = b.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let p = m[col][col].clone();
        for v in m[col].iter_mut() {
            *v /= p.clone();
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            let src = m[col].clone();
            for (dst, s) in m[r].iter_mut().zip(&src) {
                *dst -= f.clone() * s;
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

/// Verifies the final basis exactly. `rows` are the standard-form row
/// indices that survived phase 1, `basis[i]` the basic column of row `i`,
/// and `x_std` the floating-point standard-form solution. Returns true only
/// when the exact basic solution is feasible and the reduced costs certify
/// optimality (both up to noise-level slack, the data being f64-rounded),
/// and the exact solution matches `x_std` to 1e-12.
pub(crate) fn certify_basis(std_lp: &StandardLp, rows: &[usize], basis: &[usize], x_std: &[f64]) -> bool {
    let k = basis.len();
    if rows.len() != k {
        return false;
    }
    let convert = || -> Option<bool> {
        let a_rat: Vec<Vec<BigRational>> = rows
            .iter()
            .map(|&r| std_lp.a[r].iter().map(|&v| to_rat(v)).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()?;
        let b_rat: Vec<BigRational> = rows
            .iter()
            .map(|&r| to_rat(std_lp.b[r]))
            .collect::<Option<Vec<_>>>()?;
        let c_rat: Vec<BigRational> = std_lp
            .c
            .iter()
            .map(|&v| to_rat(v))
            .collect::<Option<Vec<_>>>()?;
        // basis matrix columns
        let bmat: Vec<Vec<BigRational>> = (0..k)
            .map(|i| basis.iter().map(|&j| a_rat[i][j].clone()).collect())
            .collect();
        let xb = solve_exact(&bmat, &b_rat)?;
        let feas_floor = to_rat(-FEAS_EPS)?;
        if xb.iter().any(|v| *v < feas_floor) {
            return Some(false);
        }
        // duals: Bᵀ y = c_B
        let bt: Vec<Vec<BigRational>> = (0..k)
            .map(|i| (0..k).map(|j| bmat[j][i].clone()).collect())
            .collect();
        let cb: Vec<BigRational> = basis.iter().map(|&j| c_rat[j].clone()).collect();
        let y = solve_exact(&bt, &cb)?;
        let cost_floor = to_rat(-COST_EPS)?;
        let ncols = std_lp.c.len();
        for j in 0..ncols {
            let mut reduced = c_rat[j].clone();
            for i in 0..k {
                reduced -= y[i].clone() * a_rat[i][j].clone();
            }
            if reduced < cost_floor {
                return Some(false);
            }
        }
        // compare against the floating-point solution
        let mut exact = vec![BigRational::from(BigInt::from(0)); ncols];
        for (i, &bj) in basis.iter().enumerate() {
            exact[bj] = xb[i].clone();
        }
        for (ex, &fl) in exact.iter().zip(x_std) {
            let approx = ex.to_f64()?;
            if (approx - fl).abs() > MATCH_TOL * approx.abs().max(1.0) {
                return Some(false);
            }
        }
        Some(true)
    };
    convert().unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_solver_inverts_small_system() {
        let a: Vec<Vec<BigRational>> = vec![
            vec![to_rat(2.0).unwrap(), to_rat(1.0).unwrap()],
            vec![to_rat(1.0).unwrap(), to_rat(3.0).unwrap()],
        ];
        let b = vec![to_rat(5.0).unwrap(), to_rat(10.0).unwrap()];
        let x = solve_exact(&a, &b).unwrap();
        assert_eq!(x[0], to_rat(1.0).unwrap());
        assert_eq!(x[1], to_rat(3.0).unwrap());
    }

    #[test]
    fn singular_system_is_rejected() {
        let a: Vec<Vec<BigRational>> = vec![
            vec![to_rat(1.0).unwrap(), to_rat(2.0).unwrap()],
            vec![to_rat(2.0).unwrap(), to_rat(4.0).unwrap()],
        ];
        let b = vec![to_rat(1.0).unwrap(), to_rat(2.0).unwrap()];
        assert!(solve_exact(&a, &b).is_none());
    }

    #[test]
    fn certifies_a_hand_checked_basis() {
        // min −x0 s.t. x0 + x1 = 1 (slackless standard form), x ≥ 0
        let std_lp = StandardLp {
            a: vec![vec![1.0, 1.0]],
            b: vec![1.0],
            c: vec![-1.0, 0.0],
        };
        // optimal basis {x0}: x0 = 1, reduced cost of x1 = 0 − (−1) = 1 ≥ 0
        assert!(certify_basis(&std_lp, &[0], &[0], &[1.0, 0.0]));
        // basis {x1} is feasible but NOT optimal (reduced cost of x0 < 0)
        assert!(!certify_basis(&std_lp, &[0], &[1], &[0.0, 1.0]));
    }
}
