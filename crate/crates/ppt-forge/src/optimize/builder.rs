//! Construction of conversion problems in reduced coordinates.
//!
//! `build_conversion_problem` turns a pair of states (input ρ, pure target σ)
//! plus a mode and a PPT-party set into a concrete optimization problem over
//! the Choi operator Ω on V⊗V′:
//!
//! * objective `tr{Ω ρ⊗σ}` (the success probability),
//! * exactness `tr{Ω ρ⊗(1−σ)} = 0`,
//! * complete positivity `T := Ω^{Γ_V} ⪰ 0`,
//! * PPT preservation `T^{Γ_i-pair} ⪰ 0` for each listed party,
//! * trace condition: `1_V − tr_{V′}Ω ⪰ 0` (TNP), or in TP mode the same
//!   operator is the completion ω_V and must additionally satisfy the PPT
//!   cones `pt_i(ω_V) ⪰ 0` (the completion has the ω_V⊗1/dim(V′) structure,
//!   so its cones factor through ω_V).
//!
//! When a symmetry is supplied the variables are coordinates in the
//! commutant (invariant-operator) basis of the group. If every constraint
//! family is simultaneously diagonalizable in that basis — the isotropic and
//! Werner twirls of §III/§V/§VIII — the problem collapses to a linear
//! program over the paper's a-coefficients; otherwise a block SDP is
//! emitted. Constraint blocks stay in the original (unrotated) space with
//! invariant-basis coefficients.
//!
//! The exactness constraint is PSD-paired with T, so `tr{T P} = 0` for the
//! PSD operator `P = (ρ⊗(1−σ))^{Γ_V}` forces T to vanish on the support of
//! P. The SDP route makes that face explicit: it adds the (linearly
//! dependent, but numerically stabilizing) entrywise equalities
//! `T·supp(P) = 0` and compresses the CP block to the orthocomplement of the
//! support, which restores a strictly feasible interior for the
//! interior-point solver. The LP route needs no such care and keeps the
//! scalar equality (or pins the single basis coefficient it touches).

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::multipartite::choi::ChoiOperator;
use crate::multipartite::{
    canonical_state, pt_raw, ptrace_raw, CanonicalState, StateKind, TensorSpace,
};
use crate::operator_core::eig::eigh;
use crate::operator_core::{ComplexMatrix, HermitianOperator, Rect};
use crate::symmetry::{invariant_basis, GroupKind, SymmetryGroup};

use super::{AffineBlock, LpProblem, Mode, SdpProblem};

/// Seed for the random combination used to detect simultaneous
/// diagonalizability of constraint families.
const DIAG_PROBE_SEED: u64 = 0x5eed_ba51_5000_0002;
/// A family counts as simultaneously diagonal when every member has
/// off-diagonal entries below this in the probe eigenbasis.
const DIAG_OFFDIAG_TOL: f64 = 1e-8;
/// Rows whose largest coefficient falls below this are dropped as zero.
const ROW_SCALE_FLOOR: f64 = 1e-12;
/// Coefficients below this count as structurally zero in row bookkeeping.
const COEFF_TOL: f64 = 1e-12;
/// Eigenvalues of the exactness operator above this belong to its support.
const SUPPORT_EV_CUT: f64 = 1e-9;

/// The concrete optimization form a conversion problem reduced to.
#[derive(Debug, Clone)]
pub enum ProblemForm {
    /// Fully commutative case: a linear program.
    Lp(LpProblem),
    /// General case: a block SDP.
    Sdp(SdpProblem),
}

/// A conversion problem together with the operator basis needed to map
/// solver coordinates back to a Choi operator.
#[derive(Debug, Clone)]
pub struct ConversionProblem {
    /// The reduced problem handed to `solve_lp`/`solve_sdp`.
    pub form: ProblemForm,
    basis: Vec<ComplexMatrix>,
    active: Vec<usize>,
    input_space: TensorSpace,
    output_space: TensorSpace,
}

impl ConversionProblem {
    /// Number of solver variables (basis coefficients not pinned to zero).
    pub fn num_variables(&self) -> usize {
        self.active.len()
    }

    /// Size of the underlying invariant-operator basis.
    pub fn basis_len(&self) -> usize {
        self.basis.len()
    }

    /// Input space V.
    pub fn input_space(&self) -> &TensorSpace {
        &self.input_space
    }

    /// Output space V′.
    pub fn output_space(&self) -> &TensorSpace {
        &self.output_space
    }

    /// Maps solver coordinates back to the Choi operator Σ xₖ Bₖ (pinned
    /// coefficients are zero).
    pub fn reconstruct_omega(&self, x: &[f64]) -> Result<ChoiOperator> {
        if x.len() != self.active.len() {
            return Err(Error::DimensionMismatch {
                context: "ConversionProblem::reconstruct_omega",
                expected: self.active.len(),
                got: x.len(),
            });
        }
        let dim = self.input_space.total_dim() * self.output_space.total_dim();
        let mut om = ComplexMatrix::zeros(dim);
        for (&xi, &k) in x.iter().zip(&self.active) {
            om.axpy(xi, &self.basis[k]);
        }
        let op = HermitianOperator::new(om.hermitian_part())?;
        ChoiOperator::new(op, self.input_space.clone(), self.output_space.clone())
    }
}

/// One PSD constraint family `const + Σ xₖ·coeff[k] ⪰ 0` prior to deciding
/// between the LP and SDP encodings.
struct Family {
    konst: ComplexMatrix,
    coeffs: Vec<ComplexMatrix>,
}

/// Builds the TP/TNP conversion problem for `ρ → σ` in invariant
/// coordinates. `symmetry` lists group components acting on consecutive
/// tensor slots of V⊗V′ (none = full operator basis).
pub fn build_conversion_problem(
    rho: &CanonicalState,
    sigma: &CanonicalState,
    mode: Mode,
    ppt_parties: &[&str],
    symmetry: Option<&[SymmetryGroup]>,
) -> Result<ConversionProblem> {
    if sigma.pure_state.is_none() {
        return Err(Error::InvalidParameter(
            "conversion target must be a pure state".into(),
        ));
    }
    if ppt_parties.is_empty() {
        return Err(Error::InvalidParameter(
            "ppt_parties must name at least one party".into(),
        ));
    }

    let n_in = rho.space.num_factors();
    let mut dims = rho.space.dims();
    dims.extend(sigma.space.dims());
    let dv: usize = rho.space.dims().iter().product();
    let dw: usize = sigma.space.dims().iter().product();
    let dim = dv * dw;
    let dims_v = rho.space.dims();
    let input_pos: Vec<usize> = (0..n_in).collect();

    // Factor positions (within V⊗V′) of each PPT party's input/output slots,
    // and the party's input slot within V for the ω cones.
    let mut pair_pos: Vec<Vec<usize>> = Vec::new();
    let mut omega_pos: Vec<Option<usize>> = Vec::new();
    for label in ppt_parties {
        let mut pos = Vec::new();
        let in_idx = rho.space.factor_index(label).ok();
        if let Some(i) = in_idx {
            pos.push(i);
        }
        if let Ok(j) = sigma.space.factor_index(label) {
            pos.push(n_in + j);
        }
        if pos.is_empty() {
            return Err(Error::UnknownParty {
                label: (*label).to_string(),
            });
        }
        pair_pos.push(pos);
        omega_pos.push(in_idx);
    }

    let basis = match symmetry {
        None => elementary_hermitian_basis(dim),
        Some(components) => component_product_basis(components, dv, dim)?,
    };
    let nvar = basis.len();

    // Per-basis-op transforms entering the constraints.
    let t_ops: Vec<ComplexMatrix> = basis.iter().map(|b| pt_raw(b, &dims, &input_pos)).collect();
    let trv_ops: Vec<ComplexMatrix> = basis
        .iter()
        .map(|b| ptrace_raw(b, &dims, &input_pos))
        .collect();

    let one_w = ComplexMatrix::identity(dw);
    let pex = rho.op.matrix().kron(&one_w.sub(sigma.op.matrix()));
    let rho_sigma = rho.op.matrix().kron(sigma.op.matrix());
    let exactness: Vec<f64> = basis.iter().map(|b| b.trace_product_re(&pex)).collect();
    let objective: Vec<f64> = basis
        .iter()
        .map(|b| b.trace_product_re(&rho_sigma))
        .collect();

    let mut families = Vec::new();
    families.push(Family {
        konst: ComplexMatrix::zeros(dim),
        coeffs: t_ops.clone(),
    });
    for pos in &pair_pos {
        families.push(Family {
            konst: ComplexMatrix::zeros(dim),
            coeffs: t_ops.iter().map(|t| pt_raw(t, &dims, pos)).collect(),
        });
    }
    // 1_V − tr_{V′}Ω ⪰ 0: the TNP inequality, and in TP mode the completion
    // ω_V itself.
    families.push(Family {
        konst: ComplexMatrix::identity(dv),
        coeffs: trv_ops.iter().map(|t| t.scale(-1.0)).collect(),
    });
    if mode == Mode::Tp {
        for pos in omega_pos.iter().flatten() {
            families.push(Family {
                konst: ComplexMatrix::identity(dv),
                coeffs: trv_ops
                    .iter()
                    .map(|t| pt_raw(t, &dims_v, &[*pos]).scale(-1.0))
                    .collect(),
            });
        }
    }

    let form = match try_lp_rows(&families, nvar) {
        Some(rows) => ProblemForm::Lp(assemble_lp(rows, &exactness, &objective)),
        None => ProblemForm::Sdp(assemble_sdp(
            &basis, &t_ops, &families, &pex, &dims, &input_pos, &exactness, &objective,
        )?),
    };
    let active = match &form {
        ProblemForm::Lp(lp) => lp_active(nvar, &exactness, lp.num_vars()),
        ProblemForm::Sdp(_) => (0..nvar).collect(),
    };

    Ok(ConversionProblem {
        form,
        basis,
        active,
        input_space: rho.space.clone(),
        output_space: sigma.space.clone(),
    })
}

/// HS-orthonormal Hermitian basis of the full operator space on `n` dims.
fn elementary_hermitian_basis(n: usize) -> Vec<ComplexMatrix> {
    let mut out = Vec::with_capacity(n * n);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..n {
        let mut m = ComplexMatrix::zeros(n);
        m.set(i, i, Complex64::new(1.0, 0.0));
        out.push(m);
    }
    for i in 0..n {
        for j in i + 1..n {
            let mut re = ComplexMatrix::zeros(n);
            re.set(i, j, Complex64::new(s, 0.0));
            re.set(j, i, Complex64::new(s, 0.0));
            out.push(re);
            let mut im = ComplexMatrix::zeros(n);
            im.set(i, j, Complex64::new(0.0, -s));
            im.set(j, i, Complex64::new(0.0, s));
            out.push(im);
        }
    }
    out
}

/// Commutant basis of one symmetry component. Analytic components use the
/// paper's parameterization — `{P⁺, 1−P⁺}` / `{P^a, P^s}` — with the
/// output-side isotropic complement normalized to `(1−P⁺)/(d²−1)` so LP
/// variables are exactly the aᵢ coefficients of §III.
fn component_basis(group: &SymmetryGroup, output_side: bool) -> Result<Vec<ComplexMatrix>> {
    match group.kind() {
        GroupKind::Isotropic { d } => {
            let p = canonical_state(StateKind::PhiPlus(*d))?.op.matrix().clone();
            let rest = ComplexMatrix::identity(d * d).sub(&p);
            let rest = if output_side {
                rest.scale(1.0 / ((d * d - 1) as f64))
            } else {
                rest
            };
            Ok(vec![p, rest])
        }
        GroupKind::Werner { d } => Ok(vec![
            canonical_state(StateKind::ProjAntisym(*d))?.op.matrix().clone(),
            canonical_state(StateKind::ProjSym(*d))?.op.matrix().clone(),
        ]),
        GroupKind::Finite(els) if els.len() == 1 => Ok(elementary_hermitian_basis(group.dim())),
        GroupKind::Finite(_) => Ok(invariant_basis(std::slice::from_ref(group), group.dim())?
            .basis_ops
            .into_iter()
            .map(|op| op.matrix().clone())
            .collect()),
    }
}

/// Tensor products of per-component commutant bases, in component-major
/// order. Components must tile the joint dimension exactly.
fn component_product_basis(
    components: &[SymmetryGroup],
    dv: usize,
    dim: usize,
) -> Result<Vec<ComplexMatrix>> {
    let product: usize = components.iter().map(|g| g.dim()).product();
    if product != dim {
        return Err(Error::DimensionMismatch {
            context: "build_conversion_problem symmetry space",
            expected: dim,
            got: product,
        });
    }
    let mut basis: Vec<ComplexMatrix> = vec![ComplexMatrix::identity(1)];
    let mut pre = 1usize;
    for group in components {
        let output_side = pre >= dv;
        let factors = component_basis(group, output_side)?;
        let mut next = Vec::with_capacity(basis.len() * factors.len());
        for b in &basis {
            for f in &factors {
                next.push(b.kron(f));
            }
        }
        basis = next;
        pre *= group.dim();
    }
    Ok(basis)
}

/// Standard normal draw (Box–Muller).
fn normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.gen::<f64>().max(1e-300);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Attempts to diagonalize every constraint family in one eigenbasis drawn
/// from a random member. On success returns the scalarized inequality rows
/// `(coeffs, const)` meaning `const + coeffs·x ≥ 0`, deduplicated and with
/// rows implied by the pure variable bounds removed; returns `None` as soon
/// as any family fails the off-diagonal test.
fn try_lp_rows(families: &[Family], nvar: usize) -> Option<Vec<(Vec<f64>, f64)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(DIAG_PROBE_SEED);
    let mut rows: Vec<(Vec<f64>, f64)> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for fam in families {
        let mut combo = fam.konst.clone();
        for c in &fam.coeffs {
            combo.axpy(normal(&mut rng), c);
        }
        let (_, u) = eigh(&combo.hermitian_part()).ok()?;
        let diag_of = |m: &ComplexMatrix| -> Option<Vec<f64>> {
            let d = u.adjoint().matmul(&m.matmul(&u));
            let n = d.dim();
            for i in 0..n {
                for j in 0..n {
                    if i != j && d.get(i, j).norm() > DIAG_OFFDIAG_TOL {
                        return None;
                    }
                }
            }
            Some((0..n).map(|i| d.get(i, i).re).collect())
        };
        let d_const = diag_of(&fam.konst)?;
        let mut d_coeffs = Vec::with_capacity(fam.coeffs.len());
        for c in &fam.coeffs {
            d_coeffs.push(diag_of(c)?);
        }
        for j in 0..d_const.len() {
            let a: Vec<f64> = d_coeffs.iter().map(|d| d[j]).collect();
            push_row(&mut rows, &mut seen, a, d_const[j]);
        }
    }
    debug_assert!(rows.iter().all(|(a, _)| a.len() == nvar));
    Some(drop_implied_rows(rows))
}

/// Normalizes a row to unit max-coefficient and appends it unless zero or
/// already present (keys rounded to 9 decimals).
fn push_row(
    rows: &mut Vec<(Vec<f64>, f64)>,
    seen: &mut std::collections::HashSet<Vec<i64>>,
    a: Vec<f64>,
    b: f64,
) {
    let scale = a
        .iter()
        .fold(b.abs(), |acc, v| acc.max(v.abs()));
    if scale < ROW_SCALE_FLOOR {
        return;
    }
    let a: Vec<f64> = a.iter().map(|v| v / scale).collect();
    let b = b / scale;
    let key: Vec<i64> = a
        .iter()
        .chain(std::iter::once(&b))
        .map(|v| (v * 1e9).round() as i64)
        .collect();
    if seen.insert(key) {
        rows.push((a, b));
    }
}

/// `b = 0` and exactly one positive coefficient: the row is a plain `xₖ ≥ 0`
/// bound.
fn is_pure_bound(a: &[f64], b: f64) -> Option<usize> {
    if b.abs() >= COEFF_TOL {
        return None;
    }
    let nz: Vec<usize> = (0..a.len()).filter(|&i| a[i].abs() > COEFF_TOL).collect();
    match nz.as_slice() {
        [k] if a[*k] > 0.0 => Some(*k),
        _ => None,
    }
}

/// Drops rows implied by nonnegativity of bounded variables: all-nonnegative
/// coefficients, nonnegative constant, support inside the pure-bounded set.
fn drop_implied_rows(rows: Vec<(Vec<f64>, f64)>) -> Vec<(Vec<f64>, f64)> {
    let bounded: std::collections::HashSet<usize> = rows
        .iter()
        .filter_map(|(a, b)| is_pure_bound(a, *b))
        .collect();
    rows.into_iter()
        .filter(|(a, b)| {
            if is_pure_bound(a, *b).is_some() {
                return true;
            }
            let implied = a.iter().all(|&v| v > -COEFF_TOL)
                && *b > -COEFF_TOL
                && (0..a.len())
                    .filter(|&i| a[i].abs() > COEFF_TOL)
                    .all(|i| bounded.contains(&i));
            !implied
        })
        .collect()
}

/// Indices of exactness coefficients that are structurally nonzero.
fn exactness_support(exactness: &[f64]) -> Vec<usize> {
    (0..exactness.len())
        .filter(|&k| exactness[k].abs() > COEFF_TOL)
        .collect()
}

/// Active basis indices of the LP form: all of them, minus the pinned
/// coefficient when exactness touched a single one.
fn lp_active(nvar: usize, exactness: &[f64], lp_vars: usize) -> Vec<usize> {
    let support = exactness_support(exactness);
    if support.len() == 1 && lp_vars == nvar - 1 {
        (0..nvar).filter(|k| *k != support[0]).collect()
    } else {
        (0..nvar).collect()
    }
}

/// Builds the LP from scalarized rows. A singleton-support exactness
/// constraint pins that coefficient to zero and eliminates its column;
/// otherwise exactness stays as an equality row.
fn assemble_lp(rows: Vec<(Vec<f64>, f64)>, exactness: &[f64], objective: &[f64]) -> LpProblem {
    let nvar = objective.len();
    let support = exactness_support(exactness);
    let (rows, objective, eq_rows, eq_rhs) = if let [pinned] = support.as_slice() {
        let mut reduced: Vec<(Vec<f64>, f64)> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for (a, b) in rows {
            let a: Vec<f64> = (0..nvar).filter(|k| k != pinned).map(|k| a[k]).collect();
            push_row(&mut reduced, &mut seen, a, b);
        }
        let obj: Vec<f64> = (0..nvar)
            .filter(|k| k != pinned)
            .map(|k| objective[k])
            .collect();
        (reduced, obj, Vec::new(), Vec::new())
    } else {
        (rows, objective.to_vec(), vec![exactness.to_vec()], vec![0.0])
    };
    let n = objective.len();
    LpProblem {
        objective,
        // const + a·x ≥ 0 becomes (−a)·x ≤ const.
        ineq_rows: rows.iter().map(|(a, _)| a.iter().map(|v| -v).collect()).collect(),
        ineq_rhs: rows.iter().map(|&(_, b)| b).collect(),
        eq_rows,
        eq_rhs,
        bounds: vec![(None, None); n],
    }
}

/// Builds the block SDP: exactness as a scalar equality plus the entrywise
/// kill rows `T·supp = 0`, the CP block compressed to the orthocomplement of
/// the exactness support, and every other family in the original space.
#[allow(clippy::too_many_arguments)]
fn assemble_sdp(
    basis: &[ComplexMatrix],
    t_ops: &[ComplexMatrix],
    families: &[Family],
    pex: &ComplexMatrix,
    dims: &[usize],
    input_pos: &[usize],
    exactness: &[f64],
    objective: &[f64],
) -> Result<SdpProblem> {
    let nvar = basis.len();
    let pex_pt = pt_raw(pex, dims, input_pos).hermitian_part();
    let (evals, vecs) = eigh(&pex_pt)?;
    let supp_cols: Vec<usize> = (0..evals.len()).filter(|&i| evals[i] > SUPPORT_EV_CUT).collect();
    let ker_cols: Vec<usize> = (0..evals.len()).filter(|&i| evals[i] <= SUPPORT_EV_CUT).collect();
    let supp = Rect::from_columns(&vecs, &supp_cols);
    let q = Rect::from_columns(&vecs, &ker_cols);

    let mut eq_rows = vec![exactness.to_vec()];
    let killed: Vec<Rect> = t_ops.iter().map(|t| supp.mul_left_square(t)).collect();
    let dim = pex.dim();
    for i in 0..dim {
        for j in 0..supp_cols.len() {
            let mut re_row = vec![0.0; nvar];
            let mut im_row = vec![0.0; nvar];
            for (k, tk) in killed.iter().enumerate() {
                let v = tk.get(i, j);
                re_row[k] = v.re;
                im_row[k] = v.im;
            }
            eq_rows.push(re_row);
            eq_rows.push(im_row);
        }
    }
    let eq_rhs = vec![0.0; eq_rows.len()];

    let mut blocks = Vec::with_capacity(families.len());
    // families[0] is the CP family T(x) ⪰ 0; compress it to Q†TQ.
    let mut cp = Vec::with_capacity(nvar + 1);
    cp.push(ComplexMatrix::zeros(ker_cols.len()));
    for t in t_ops {
        cp.push(q.sandwich(t).hermitian_part());
    }
    blocks.push(AffineBlock { mats: cp });
    for fam in &families[1..] {
        let mut mats = Vec::with_capacity(nvar + 1);
        mats.push(fam.konst.clone());
        for c in &fam.coeffs {
            mats.push(c.hermitian_part());
        }
        blocks.push(AffineBlock { mats });
    }

    let problem = SdpProblem {
        objective: objective.to_vec(),
        eq_rows,
        eq_rhs,
        blocks,
    };
    problem.validate()?;
    Ok(problem)
}
