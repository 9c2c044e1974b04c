//! Twirling projections and invariant-operator bases.
//!
//! A [`SymmetryGroup`] is either an explicit finite unitary group (closed by
//! BFS with phase-canonical dedup) or one of the two continuous twirls used
//! by the bipartite problems — isotropic (U⊗U*) and Werner (U⊗U) — whose
//! averages are evaluated analytically from their known two-dimensional
//! commutants. Composite spaces twirl factor-by-factor; [`invariant_basis`]
//! produces an orthonormal Hermitian basis of the joint fixed-point space by
//! averaging random Hermitian seeds, with its dimension cross-checked
//! against the trace of the averaging superoperator.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::operator_core::{ComplexMatrix, HermitianOperator};

/// Default BFS cap for finite-group closure.
pub const DEFAULT_GROUP_CAP: usize = 100_000;

/// Fixed chunk length for group-element accumulation. Partial sums are
/// formed per chunk and combined in chunk order, so the floating-point
/// result is identical whether chunks are processed in parallel or not.
const TWIRL_CHUNK: usize = 8;

/// Seed for the random Hermitian probes of [`invariant_basis`]; fixed so
/// bases are reproducible across runs.
const BASIS_PROBE_SEED: u64 = 0x5eed_ba51_5000_0001;

/// A symmetry to average over.
#[derive(Debug, Clone)]
pub enum GroupKind {
    /// Explicit finite set of unitaries (phase-canonicalized, deduplicated).
    Finite(Vec<ComplexMatrix>),
    /// Continuous isotropic twirl ∫dU (U⊗U*)·(U⊗U*)† on a d⊗d factor pair.
    Isotropic {
        /// Local dimension of each factor in the pair.
        d: usize,
    },
    /// Continuous Werner twirl ∫dU (U⊗U)·(U⊗U)† on a d⊗d factor pair.
    Werner {
        /// Local dimension of each factor in the pair.
        d: usize,
    },
}

/// Symmetry group acting on one tensor block.
#[derive(Debug, Clone)]
pub struct SymmetryGroup {
    kind: GroupKind,
}

impl SymmetryGroup {
    /// Wraps an explicit element list (validated unitary, canonicalized,
    /// deduplicated; the identity is added if missing).
    pub fn finite(elements: Vec<ComplexMatrix>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::InvalidParameter(
                "finite group needs at least one element".into(),
            ));
        }
        let dim = elements[0].dim();
        let mut canon = vec![canonicalize_phase(&ComplexMatrix::identity(dim))];
        let mut keys = std::collections::HashSet::new();
        keys.insert(element_key(&canon[0]));
        for el in &elements {
            check_unitary(el)?;
            let c = canonicalize_phase(el);
            if keys.insert(element_key(&c)) {
                canon.push(c);
            }
        }
        Ok(SymmetryGroup {
            kind: GroupKind::Finite(canon),
        })
    }

    /// Isotropic twirl on a d⊗d pair.
    pub fn isotropic(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidParameter("isotropic twirl needs d >= 2".into()));
        }
        Ok(SymmetryGroup {
            kind: GroupKind::Isotropic { d },
        })
    }

    /// Werner twirl on a d⊗d pair.
    pub fn werner(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidParameter("werner twirl needs d >= 2".into()));
        }
        Ok(SymmetryGroup {
            kind: GroupKind::Werner { d },
        })
    }

    /// The kind of the group.
    pub fn kind(&self) -> &GroupKind {
        &self.kind
    }

    /// Dimension of the block this symmetry acts on.
    pub fn dim(&self) -> usize {
        match &self.kind {
            GroupKind::Finite(els) => els[0].dim(),
            GroupKind::Isotropic { d } | GroupKind::Werner { d } => d * d,
        }
    }

    /// Number of elements for finite groups.
    pub fn order(&self) -> Option<usize> {
        match &self.kind {
            GroupKind::Finite(els) => Some(els.len()),
            _ => None,
        }
    }

    /// Dimension of this block's fixed-point (commutant) space:
    /// `(1/|G|)Σ|tr U|²` for finite groups, 2 for the analytic twirls.
    pub fn fixed_space_dim(&self) -> Result<usize> {
        match &self.kind {
            GroupKind::Finite(els) => {
                let s: f64 = els
                    .iter()
                    .map(|u| u.trace().norm_sqr())
                    .sum::<f64>()
                    / els.len() as f64;
                let rounded = s.round();
                if (s - rounded).abs() > 1e-6 {
                    return Err(Error::SearchFailure(format!(
                        "averaging superoperator trace {s} is not near an integer"
                    )));
                }
                Ok(rounded as usize)
            }
            GroupKind::Isotropic { .. } | GroupKind::Werner { .. } => Ok(2),
        }
    }
}

fn check_unitary(u: &ComplexMatrix) -> Result<()> {
    let gram = u.adjoint().matmul(u);
    let defect = gram.sub(&ComplexMatrix::identity(u.dim())).max_abs_entry();
    if defect > 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "element is not unitary (defect {defect:.3e})"
        )));
    }
    Ok(())
}

/// Divides a matrix by the phase of its first entry of magnitude > 1e-9 in
/// row-major order, making representatives of projectively-equal elements
/// bitwise comparable.
fn canonicalize_phase(u: &ComplexMatrix) -> ComplexMatrix {
    for z in u.entries() {
        if z.norm() > 1e-9 {
            let phase = z / z.norm();
            return scale_complex(u, phase.conj());
        }
    }
    u.clone()
}

fn scale_complex(m: &ComplexMatrix, factor: Complex64) -> ComplexMatrix {
    ComplexMatrix::from_fn(m.dim(), |i, j| m.get(i, j) * factor)
}

/// Dedup key: entries rounded to 1e-6 (as integers, so signed zero collapses).
fn element_key(u: &ComplexMatrix) -> Vec<i64> {
    let mut key = Vec::with_capacity(2 * u.entries().len());
    for z in u.entries() {
        key.push((z.re * 1e6).round() as i64);
        key.push((z.im * 1e6).round() as i64);
    }
    key
}

/// BFS closure of a generator set under multiplication, with
/// phase-canonical deduplication. Errors when `cap` is exceeded (the usual
/// sign that a continuous group was passed by mistake).
pub fn generate_group(generators: &[ComplexMatrix], cap: usize) -> Result<SymmetryGroup> {
    if generators.is_empty() || cap == 0 {
        return Err(Error::InvalidParameter(
            "generate_group needs generators and cap >= 1".into(),
        ));
    }
    let dim = generators[0].dim();
    for g in generators {
        if g.dim() != dim {
            return Err(Error::DimensionMismatch {
                context: "generate_group",
                expected: dim,
                got: g.dim(),
            });
        }
        check_unitary(g)?;
    }
    let gens: Vec<ComplexMatrix> = generators.iter().map(canonicalize_phase).collect();
    let identity = canonicalize_phase(&ComplexMatrix::identity(dim));
    let mut elements = vec![identity];
    let mut keys = std::collections::HashSet::new();
    keys.insert(element_key(&elements[0]));
    let mut frontier = 0usize;
    while frontier < elements.len() {
        let base = elements[frontier].clone();
        frontier += 1;
        for g in &gens {
            let prod = canonicalize_phase(&base.matmul(g));
            if keys.insert(element_key(&prod)) {
                elements.push(prod);
                if elements.len() > cap {
                    return Err(Error::GroupCapExceeded { cap });
                }
            }
        }
    }
    Ok(SymmetryGroup {
        kind: GroupKind::Finite(elements),
    })
}

/// Monomial (generalized permutation) view of a unitary: one nonzero per
/// column, `u[perm[c], c] = phase[c]`. Conjugation by such elements is
/// O(n²), which is what makes averaging over the qubit symmetry groups
/// (whose elements are all monomial) cheap.
fn as_monomial(u: &ComplexMatrix) -> Option<(Vec<usize>, Vec<Complex64>)> {
    let n = u.dim();
    let mut perm = vec![usize::MAX; n];
    let mut phase = vec![Complex64::new(0.0, 0.0); n];
    for col in 0..n {
        let mut found = usize::MAX;
        for row in 0..n {
            let z = u.get(row, col);
            if z.norm_sqr() > 1e-24 {
                if found != usize::MAX {
                    return None;
                }
                found = row;
                phase[col] = z;
            }
        }
        if found == usize::MAX {
            return None;
        }
        perm[col] = found;
    }
    let mut hit = vec![false; n];
    for &r in &perm {
        if hit[r] {
            return None;
        }
        hit[r] = true;
    }
    Some((perm, phase))
}

/// Sums `U_k M U_k†` over the elements of one chunk, with `U_k` embedded
/// between identities of dimension `pre` and `post`.
fn chunk_twirl(chunk: &[ComplexMatrix], m: &ComplexMatrix, pre: usize, post: usize) -> ComplexMatrix {
    let dim = m.dim();
    let mut acc = ComplexMatrix::zeros(dim);
    for u in chunk {
        if let Some((perm, phase)) = as_monomial(u) {
            let slot = u.dim();
            // map extended index (p,s,q) -> (p,perm[s],q) with its phase
            let mapped: Vec<(usize, Complex64)> = (0..dim)
                .map(|e| {
                    let q = e % post;
                    let s = (e / post) % slot;
                    let p = e / (post * slot);
                    ((p * slot + perm[s]) * post + q, phase[s])
                })
                .collect();
            for row in 0..dim {
                let (nrow, ph_r) = mapped[row];
                for col in 0..dim {
                    let z = m.get(row, col);
                    if z.re == 0.0 && z.im == 0.0 {
                        continue;
                    }
                    let (ncol, ph_c) = mapped[col];
                    let cur = acc.get(nrow, ncol);
                    acc.set(nrow, ncol, cur + ph_r * z * ph_c.conj());
                }
            }
        } else {
            let ext = if pre == 1 && post == 1 {
                u.clone()
            } else {
                ComplexMatrix::identity(pre)
                    .kron(u)
                    .kron(&ComplexMatrix::identity(post))
            };
            let term = ext.matmul(m).matmul(&ext.adjoint());
            acc = acc.add(&term);
        }
    }
    acc
}

/// Average of `U M U†` over a finite element list, embedded between
/// identities of dimension `pre` and `post`. Chunk partial sums are combined
/// in fixed order so the parallel and sequential paths agree bitwise.
fn finite_average(els: &[ComplexMatrix], m: &ComplexMatrix, pre: usize, post: usize) -> ComplexMatrix {
    let chunks: Vec<&[ComplexMatrix]> = els.chunks(TWIRL_CHUNK).collect();
    #[cfg(feature = "parallel")]
    let partials: Vec<ComplexMatrix> = {
        use rayon::prelude::*;
        chunks
            .par_iter()
            .map(|c| chunk_twirl(c, m, pre, post))
            .collect()
    };
    #[cfg(not(feature = "parallel"))]
    let partials: Vec<ComplexMatrix> = chunks
        .iter()
        .map(|c| chunk_twirl(c, m, pre, post))
        .collect();
    let mut acc = ComplexMatrix::zeros(m.dim());
    for p in &partials {
        acc = acc.add(p);
    }
    acc.scale(1.0 / els.len() as f64)
}

/// Hilbert–Schmidt orthonormal commutant basis of an analytic twirl.
fn analytic_commutant(kind: &GroupKind) -> Vec<ComplexMatrix> {
    match kind {
        GroupKind::Isotropic { d } => {
            let d = *d;
            let dd = d * d;
            // P+ and (1 - P+)/sqrt(d^2-1)
            let mut pplus = ComplexMatrix::zeros(dd);
            for i in 0..d {
                for j in 0..d {
                    pplus.set(i * d + i, j * d + j, Complex64::new(1.0 / d as f64, 0.0));
                }
            }
            let rest = ComplexMatrix::identity(dd)
                .sub(&pplus)
                .scale(1.0 / ((dd - 1) as f64).sqrt());
            vec![pplus, rest]
        }
        GroupKind::Werner { d } => {
            let d = *d;
            let dd = d * d;
            let mut swap = ComplexMatrix::zeros(dd);
            for i in 0..d {
                for j in 0..d {
                    swap.set(i * d + j, j * d + i, Complex64::new(1.0, 0.0));
                }
            }
            let id = ComplexMatrix::identity(dd);
            let pa = id.sub(&swap).scale(0.5);
            let ps = id.add(&swap).scale(0.5);
            let ra = (d * (d - 1) / 2) as f64;
            let rs = (d * (d + 1) / 2) as f64;
            vec![pa.scale(1.0 / ra.sqrt()), ps.scale(1.0 / rs.sqrt())]
        }
        GroupKind::Finite(_) => unreachable!("analytic commutant of finite group"),
    }
}

/// Projects the `slot` tensor block of `m` (sitting between `pre` and
/// `post`-dimensional identities) onto the span of an HS-orthonormal basis.
fn project_slot(
    m: &ComplexMatrix,
    pre: usize,
    basis: &[ComplexMatrix],
    post: usize,
) -> ComplexMatrix {
    let slot = basis[0].dim();
    let dim = m.dim();
    let mut out = ComplexMatrix::zeros(dim);
    for e in basis {
        // c[(p,q),(p',q')] = sum_{s,s'} conj(e[s,s']) m[(p,s,q),(p',s',q')]
        let mut coeff = ComplexMatrix::zeros(pre * post);
        for p in 0..pre {
            for pp in 0..pre {
                for q in 0..post {
                    for qp in 0..post {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for s in 0..slot {
                            for sp in 0..slot {
                                let row = (p * slot + s) * post + q;
                                let col = (pp * slot + sp) * post + qp;
                                acc += e.get(s, sp).conj() * m.get(row, col);
                            }
                        }
                        coeff.set(p * post + q, pp * post + qp, acc);
                    }
                }
            }
        }
        // out += e placed in the slot, weighted by coeff on (pre,post)
        for p in 0..pre {
            for pp in 0..pre {
                for q in 0..post {
                    for qp in 0..post {
                        let w = coeff.get(p * post + q, pp * post + qp);
                        if w.re == 0.0 && w.im == 0.0 {
                            continue;
                        }
                        for s in 0..slot {
                            for sp in 0..slot {
                                let row = (p * slot + s) * post + q;
                                let col = (pp * slot + sp) * post + qp;
                                let cur = out.get(row, col);
                                out.set(row, col, cur + w * e.get(s, sp));
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// Raw composite twirl: averages each component over its tensor block, in
/// order. Components act on consecutive blocks whose dims multiply to the
/// operator dimension.
pub(crate) fn twirl_raw(m: &ComplexMatrix, components: &[SymmetryGroup]) -> Result<ComplexMatrix> {
    let total: usize = components.iter().map(|c| c.dim()).product();
    if total != m.dim() {
        return Err(Error::DimensionMismatch {
            context: "twirl",
            expected: total,
            got: m.dim(),
        });
    }
    let dims: Vec<usize> = components.iter().map(|c| c.dim()).collect();
    let mut cur = m.clone();
    for (i, comp) in components.iter().enumerate() {
        let pre: usize = dims[..i].iter().product();
        let post: usize = dims[i + 1..].iter().product();
        cur = match comp.kind() {
            GroupKind::Finite(els) => finite_average(els, &cur, pre, post),
            kind => project_slot(&cur, pre, &analytic_commutant(kind), post),
        };
    }
    Ok(cur)
}

/// Twirl over a single symmetry group.
pub fn average_project(op: &HermitianOperator, group: &SymmetryGroup) -> Result<HermitianOperator> {
    average_project_composite(op, std::slice::from_ref(group))
}

/// Twirl over a composite of symmetries acting on consecutive tensor blocks.
pub fn average_project_composite(
    op: &HermitianOperator,
    components: &[SymmetryGroup],
) -> Result<HermitianOperator> {
    let avg = twirl_raw(op.matrix(), components)?;
    Ok(HermitianOperator::new(avg.hermitian_part())
        .expect("twirl preserves Hermiticity"))
}

/// Orthonormal Hermitian basis of a fixed-point space.
#[derive(Debug, Clone)]
pub struct InvariantBasis {
    /// HS-orthonormal Hermitian operators spanning the invariant subspace.
    pub basis_ops: Vec<HermitianOperator>,
    /// Pairwise Hilbert–Schmidt inner products of `basis_ops`.
    pub gram: Vec<Vec<f64>>,
}

impl InvariantBasis {
    /// Number of basis operators.
    pub fn len(&self) -> usize {
        self.basis_ops.len()
    }

    /// True when the basis is empty.
    pub fn is_empty(&self) -> bool {
        self.basis_ops.is_empty()
    }
}

/// Builds an HS-orthonormal basis of the joint fixed-point space of the
/// composite: random Hermitian probes are twirled, their Gram matrix is
/// eigendecomposed, and the surviving directions are normalized. The count
/// must match the superoperator-trace prediction or an error is returned.
pub fn invariant_basis(components: &[SymmetryGroup], dim: usize) -> Result<InvariantBasis> {
    let total: usize = components.iter().map(|c| c.dim()).product();
    if total != dim {
        return Err(Error::DimensionMismatch {
            context: "invariant_basis",
            expected: total,
            got: dim,
        });
    }
    let mut expected = 1usize;
    for c in components {
        expected *= c.fixed_space_dim()?;
    }
    let probes = expected + 8;
    let mut rng = ChaCha8Rng::seed_from_u64(BASIS_PROBE_SEED);
    let mut averaged: Vec<ComplexMatrix> = Vec::with_capacity(probes);
    for _ in 0..probes {
        let raw = ComplexMatrix::from_fn(dim, |_, _| {
            Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
        });
        let h = raw.hermitian_part();
        averaged.push(twirl_raw(&h, components)?.hermitian_part());
    }
    // Gram matrix of the twirled probes (real for Hermitian operators).
    let mut gram = ComplexMatrix::zeros(probes);
    for i in 0..probes {
        for j in 0..probes {
            let v = averaged[i].trace_product_re(&averaged[j]);
            gram.set(i, j, Complex64::new(v, 0.0));
        }
    }
    let (evals, evecs) = crate::operator_core::eig::eigh(&gram)?;
    let mut basis_ops = Vec::new();
    for k in 0..probes {
        if evals[k] > 1e-8 {
            let mut combo = ComplexMatrix::zeros(dim);
            for i in 0..probes {
                // eigenvectors of a real symmetric Gram stay real up to phase
                let w = evecs.get(i, k);
                combo = combo.add(&scale_complex(&averaged[i], w));
            }
            let e = combo.hermitian_part().scale(1.0 / evals[k].sqrt());
            basis_ops.push(HermitianOperator::new(e).expect("symmetrized"));
        }
    }
    if basis_ops.len() != expected {
        return Err(Error::SearchFailure(format!(
            "invariant basis dimension {} disagrees with superoperator trace {}",
            basis_ops.len(),
            expected
        )));
    }
    let n = basis_ops.len();
    let mut gram_out = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in 0..n {
            gram_out[i][j] = basis_ops[i]
                .matrix()
                .trace_product_re(basis_ops[j].matrix());
        }
    }
    Ok(InvariantBasis { basis_ops, gram: gram_out })
}

/// Small gate constructors shared by the finite-group builders.
pub(crate) mod gates {
    use super::*;

    /// Pauli X.
    pub(crate) fn x() -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(2);
        m.set(0, 1, Complex64::new(1.0, 0.0));
        m.set(1, 0, Complex64::new(1.0, 0.0));
        m
    }

    /// Pauli Z.
    pub(crate) fn z() -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(2);
        m.set(0, 0, Complex64::new(1.0, 0.0));
        m.set(1, 1, Complex64::new(-1.0, 0.0));
        m
    }

    /// Single-qubit diagonal gate diag(a, b).
    pub(crate) fn diag2(a: Complex64, b: Complex64) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(2);
        m.set(0, 0, a);
        m.set(1, 1, b);
        m
    }

    /// Phase gate diag(1, e^{2πi/3}); its cube is a global phase, so
    /// triple products preserve GHZ-type superpositions.
    pub(crate) fn third_phase() -> ComplexMatrix {
        let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        diag2(Complex64::new(1.0, 0.0), w)
    }

    /// Phase gate diag(i, -1); triple products act as a global phase on the
    /// single-excitation (W-type) subspace.
    pub(crate) fn w_phase() -> ComplexMatrix {
        diag2(Complex64::new(0.0, 1.0), Complex64::new(-1.0, 0.0))
    }

    /// Permutation unitary on n qubits moving the qubit at position q to
    /// position perm[q] (position 0 = most significant bit).
    pub(crate) fn qubit_permutation(perm: &[usize]) -> ComplexMatrix {
        let n = perm.len();
        let dim = 1usize << n;
        let mut m = ComplexMatrix::zeros(dim);
        for src in 0..dim {
            let mut dst = 0usize;
            for q in 0..n {
                let bit = (src >> (n - 1 - q)) & 1;
                dst |= bit << (n - 1 - perm[q]);
            }
            m.set(dst, src, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Kronecker product of a gate list.
    pub(crate) fn kron_all(ms: &[&ComplexMatrix]) -> ComplexMatrix {
        let mut out = ms[0].clone();
        for m in &ms[1..] {
            out = out.kron(m);
        }
        out
    }
}

/// Finite symmetry group of the six-qubit GHZ/W conversion problem.
///
/// When `ghz_first` the GHZ state sits on the first three qubits (input
/// space) and the W state on the last three; otherwise the roles are
/// swapped. Generators: the GHZ stabilizer-type gates and third-roots-of-
/// unity phases on the GHZ side, global Z and W-phase gates on the W side,
/// plus simultaneous qubit permutations of both sides.
pub(crate) fn ghz_w_group(ghz_first: bool) -> Result<SymmetryGroup> {
    use gates::*;
    let i2 = ComplexMatrix::identity(2);
    let (xg, zg, p1, p2) = (x(), z(), third_phase(), w_phase());
    let mut gens = if ghz_first {
        vec![
            kron_all(&[&xg, &xg, &xg, &i2, &i2, &i2]),
            kron_all(&[&zg, &zg, &i2, &i2, &i2, &i2]),
            kron_all(&[&i2, &zg, &zg, &i2, &i2, &i2]),
            kron_all(&[&i2, &i2, &i2, &zg, &zg, &zg]),
            kron_all(&[&p1, &p1, &p1, &i2, &i2, &i2]),
            kron_all(&[&i2, &i2, &i2, &p2, &p2, &p2]),
        ]
    } else {
        vec![
            kron_all(&[&i2, &i2, &i2, &xg, &xg, &xg]),
            kron_all(&[&i2, &i2, &i2, &zg, &zg, &i2]),
            kron_all(&[&i2, &i2, &i2, &i2, &zg, &zg]),
            kron_all(&[&zg, &zg, &zg, &i2, &i2, &i2]),
            kron_all(&[&i2, &i2, &i2, &p1, &p1, &p1]),
            kron_all(&[&p2, &p2, &p2, &i2, &i2, &i2]),
        ]
    };
    for perm in [[1usize, 0, 2], [1, 2, 0]] {
        let u3 = qubit_permutation(&perm);
        gens.push(u3.kron(&u3));
    }
    generate_group(&gens, DEFAULT_GROUP_CAP)
}

/// Finite symmetry group of the two-qubit-to-GHZ unlocking problem on five
/// qubits (two input, three output): joint X and Z parities, the relative
/// phase on the input pair, third-phases on the output triple, and the
/// simultaneous swap of the first two parties on both sides.
pub(crate) fn unlocking_group() -> Result<SymmetryGroup> {
    use gates::*;
    let i2 = ComplexMatrix::identity(2);
    let (xg, zg, p1) = (x(), z(), third_phase());
    let p1c = p1.conj();
    let gens = vec![
        kron_all(&[&xg, &xg, &xg, &xg, &xg]),
        kron_all(&[&zg, &zg, &zg, &zg, &i2]),
        kron_all(&[&i2, &i2, &zg, &i2, &zg]),
        kron_all(&[&p1, &p1c, &i2, &i2, &i2]),
        kron_all(&[&i2, &i2, &p1, &p1, &p1]),
        qubit_permutation(&[1, 0]).kron(&qubit_permutation(&[1, 0, 2])),
    ];
    generate_group(&gens, DEFAULT_GROUP_CAP)
}
