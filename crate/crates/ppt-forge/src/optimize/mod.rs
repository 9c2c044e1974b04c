//! Conversion-problem construction and in-house LP/SDP solvers.
//!
//! Problems arrive in reduced coordinates: the variable vector is a set of
//! coefficients in an invariant operator basis, constrained by linear
//! equalities and by affine Hermitian families that must stay PSD. Fully
//! reduced (bipartite) instances collapse to linear programs; the
//! multipartite ones are solved by a primal-dual path-following
//! interior-point method with dense normal equations.

mod builder;
mod rational;
mod sdp;
mod simplex;

pub use builder::{build_conversion_problem, ConversionProblem, ProblemForm};
pub use sdp::solve_sdp;
pub use simplex::solve_lp;

use crate::error::{Error, Result};
use crate::operator_core::ComplexMatrix;

/// Conversion mode: exact trace-preserving maps or the trace-non-increasing
/// relaxation (success probability conditioned on a flag outcome).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Trace-preserving: completion ω = 1⊗1/dim − … must satisfy every cone.
    Tp,
    /// Trace-non-increasing: only 1 − tr_{V′}Ω ⪰ 0 is required.
    Tnp,
}

/// Linear program `max c·x` subject to `A x ≤ b`, `E x = f` and optional
/// per-variable bounds.
#[derive(Debug, Clone)]
pub struct LpProblem {
    /// Objective coefficients (maximized).
    pub objective: Vec<f64>,
    /// Inequality rows, one coefficient vector per row.
    pub ineq_rows: Vec<Vec<f64>>,
    /// Inequality right-hand sides.
    pub ineq_rhs: Vec<f64>,
    /// Equality rows.
    pub eq_rows: Vec<Vec<f64>>,
    /// Equality right-hand sides.
    pub eq_rhs: Vec<f64>,
    /// Per-variable `(lower, upper)` bounds; `None` = unbounded on that side.
    pub bounds: Vec<(Option<f64>, Option<f64>)>,
}

impl LpProblem {
    /// Number of variables.
    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    /// Checks that all row lengths agree with the variable count.
    pub fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if self.bounds.len() != n {
            return Err(Error::DimensionMismatch {
                context: "LpProblem bounds",
                expected: n,
                got: self.bounds.len(),
            });
        }
        if self.ineq_rows.len() != self.ineq_rhs.len()
            || self.eq_rows.len() != self.eq_rhs.len()
        {
            return Err(Error::InvalidParameter(
                "LP row/rhs counts disagree".into(),
            ));
        }
        for row in self.ineq_rows.iter().chain(self.eq_rows.iter()) {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    context: "LpProblem row",
                    expected: n,
                    got: row.len(),
                });
            }
        }
        Ok(())
    }
}

/// One affine PSD constraint: `mats[0] + Σᵢ xᵢ · mats[1+i] ⪰ 0`.
#[derive(Debug, Clone)]
pub struct AffineBlock {
    /// Constant term followed by one coefficient matrix per variable.
    pub mats: Vec<ComplexMatrix>,
}

impl AffineBlock {
    /// Block dimension.
    pub fn dim(&self) -> usize {
        self.mats[0].dim()
    }

    /// Evaluates the affine family at `x`.
    pub fn eval(&self, x: &[f64]) -> ComplexMatrix {
        let mut out = self.mats[0].clone();
        for (xi, f) in x.iter().zip(&self.mats[1..]) {
            out.axpy(*xi, f);
        }
        out
    }
}

/// Semidefinite program `max c·x` subject to `E x = f` and a list of affine
/// Hermitian families required PSD.
#[derive(Debug, Clone)]
pub struct SdpProblem {
    /// Objective coefficients (maximized).
    pub objective: Vec<f64>,
    /// Equality rows.
    pub eq_rows: Vec<Vec<f64>>,
    /// Equality right-hand sides.
    pub eq_rhs: Vec<f64>,
    /// PSD blocks.
    pub blocks: Vec<AffineBlock>,
}

impl SdpProblem {
    /// Number of variables.
    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    /// Checks dimensions and Hermiticity of every block family member.
    pub fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if self.eq_rows.len() != self.eq_rhs.len() {
            return Err(Error::InvalidParameter(
                "SDP equality row/rhs counts disagree".into(),
            ));
        }
        for row in &self.eq_rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    context: "SdpProblem equality row",
                    expected: n,
                    got: row.len(),
                });
            }
        }
        for block in &self.blocks {
            if block.mats.len() != n + 1 {
                return Err(Error::DimensionMismatch {
                    context: "SdpProblem block family",
                    expected: n + 1,
                    got: block.mats.len(),
                });
            }
            let d = block.dim();
            for m in &block.mats {
                if m.dim() != d {
                    return Err(Error::DimensionMismatch {
                        context: "SdpProblem block member",
                        expected: d,
                        got: m.dim(),
                    });
                }
                let defect = m.hermiticity_defect();
                if defect > 1e-10 * m.max_abs_entry().max(1.0) {
                    return Err(Error::InvalidParameter(format!(
                        "block family member is not Hermitian (defect {defect:.3e})"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Solve outcome classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    /// Converged within tolerances.
    Optimal,
    /// Dual objective diverged past the divergence threshold (flagged, not
    /// proven infeasible), or equalities are inconsistent.
    Infeasible,
    /// LP objective improves without bound.
    Unbounded,
    /// Iteration cap reached; best iterate returned.
    MaxIter,
}

/// Result of an LP/SDP solve.
#[derive(Debug, Clone)]
pub struct SolveReport {
    /// Outcome classification.
    pub status: SolveStatus,
    /// Primal solution in problem coordinates.
    pub x: Vec<f64>,
    /// Primal objective value `c·x`.
    pub value: f64,
    /// Valid upper bound on the optimum from the dual solve.
    pub dual_bound: f64,
    /// `dual_bound − value`.
    pub gap: f64,
    /// Minimum eigenvalue of each PSD block at `x` (empty for LPs).
    pub block_margins: Vec<f64>,
    /// True when the LP final basis passed the exact rational recheck.
    pub rational_certified: bool,
    /// Iterations used by the solver.
    pub iterations: usize,
}

pub use pipeline::{
    completion_omega_v, conversion_report, optimal_probability, solve_conversion, tp_from_tnp,
    TpCompletion,
};

mod pipeline;
