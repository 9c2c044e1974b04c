//! Tensor-space bookkeeping and multipartite operator manipulation.
//!
//! Provides labeled tensor spaces, the canonical states of the conversion
//! problems (maximally entangled, GHZ, W, Werner/antisymmetric), partial
//! trace and partial transpose over party subsets, negativity, and — in
//! [`choi`] — the Choi isomorphism between operators and maps.
//!
//! Index convention (binding for all tabulated data): the computational-basis
//! index of a multi-factor space is the mixed-radix integer with the first
//! factor's digit most significant; on a joint space V⊗V′ the index is
//! `idx_V * dim(V′) + idx_V′`.

pub mod choi;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operator_core::{trace_norm, ComplexMatrix, HermitianOperator};

pub use choi::{choi_apply, success_probability, ChoiOperator, SuccessProbability};

/// Ordered list of labeled tensor factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorSpace {
    factors: Vec<(String, usize)>,
}

impl TensorSpace {
    /// Builds a space from `(party_label, dim)` factors. Labels must be
    /// unique; dims must be ≥ 1 (dimension 1 marks a trivial factor).
    pub fn new(factors: Vec<(String, usize)>) -> Result<Self> {
        for (i, (label, dim)) in factors.iter().enumerate() {
            if *dim == 0 {
                return Err(Error::InvalidParameter(format!(
                    "factor {label} has dimension 0"
                )));
            }
            if factors[..i].iter().any(|(l, _)| l == label) {
                return Err(Error::InvalidParameter(format!(
                    "duplicate party label {label}"
                )));
            }
        }
        Ok(TensorSpace { factors })
    }

    /// Convenience constructor: one qubit per label.
    pub fn qubits(labels: &[&str]) -> Result<Self> {
        Self::new(labels.iter().map(|l| (l.to_string(), 2)).collect())
    }

    /// The ordered factors.
    pub fn factors(&self) -> &[(String, usize)] {
        &self.factors
    }

    /// Product of factor dimensions.
    pub fn total_dim(&self) -> usize {
        self.factors.iter().map(|(_, d)| d).product()
    }

    /// Number of factors.
    pub fn num_factors(&self) -> usize {
        self.factors.len()
    }

    /// Position of a party label.
    pub fn factor_index(&self, label: &str) -> Result<usize> {
        self.factors
            .iter()
            .position(|(l, _)| l == label)
            .ok_or_else(|| Error::UnknownParty {
                label: label.to_string(),
            })
    }

    /// Resolves a list of labels to factor positions.
    pub fn factor_indices(&self, labels: &[&str]) -> Result<Vec<usize>> {
        labels.iter().map(|l| self.factor_index(l)).collect()
    }

    /// Concatenation `self ⊗ other`; labels must stay unique.
    pub fn join(&self, other: &TensorSpace) -> Result<TensorSpace> {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        TensorSpace::new(factors)
    }

    /// The subspace of the factors whose positions are listed, in original
    /// factor order.
    pub fn subspace(&self, positions: &[usize]) -> TensorSpace {
        let factors = self
            .factors
            .iter()
            .enumerate()
            .filter(|(i, _)| positions.contains(i))
            .map(|(_, f)| f.clone())
            .collect();
        TensorSpace { factors }
    }

    /// Factor dimensions in order.
    pub fn dims(&self) -> Vec<usize> {
        self.factors.iter().map(|&(_, d)| d).collect()
    }
}

/// Pure state: unit-norm amplitude vector over a tensor space.
#[derive(Debug, Clone)]
pub struct PureState {
    space: TensorSpace,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Validates length and unit norm (within 1e-12).
    pub fn new(space: TensorSpace, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != space.total_dim() {
            return Err(Error::DimensionMismatch {
                context: "PureState::new",
                expected: space.total_dim(),
                got: amplitudes.len(),
            });
        }
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "pure-state norm {norm} deviates from 1"
            )));
        }
        Ok(PureState { space, amplitudes })
    }

    /// The underlying space.
    pub fn space(&self) -> &TensorSpace {
        &self.space
    }

    /// Amplitude vector.
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Density matrix |ψ⟩⟨ψ|.
    pub fn density(&self) -> HermitianOperator {
        let n = self.amplitudes.len();
        let m = ComplexMatrix::from_fn(n, |i, j| {
            self.amplitudes[i] * self.amplitudes[j].conj()
        });
        HermitianOperator::new(m).expect("outer product is Hermitian")
    }
}

/// Kronecker product respecting factor ordering (`x`'s factors first).
pub fn tensor_product(x: &HermitianOperator, y: &HermitianOperator) -> HermitianOperator {
    HermitianOperator::new(x.matrix().kron(y.matrix()))
        .expect("Kronecker product of Hermitian operators is Hermitian")
}

/// Decomposes `idx` into mixed-radix digits for the given dims (first digit
/// most significant).
#[inline]
fn decompose(mut idx: usize, dims: &[usize], out: &mut [usize]) {
    for f in (0..dims.len()).rev() {
        out[f] = idx % dims[f];
        idx /= dims[f];
    }
}

/// Partial trace keeping the named parties (result factors keep their
/// original order); `tr(result) = tr(op)`.
pub fn partial_trace(
    op: &HermitianOperator,
    space: &TensorSpace,
    keep: &[&str],
) -> Result<HermitianOperator> {
    let keep_pos = space.factor_indices(keep)?;
    Ok(HermitianOperator::new(ptrace_raw(
        op.matrix(),
        &space.dims(),
        &keep_pos,
    ))
    .expect("partial trace preserves Hermiticity"))
}

/// Raw partial trace by factor positions.
pub(crate) fn ptrace_raw(m: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> ComplexMatrix {
    let nf = dims.len();
    let kept: Vec<usize> = (0..nf).filter(|i| keep.contains(i)).collect();
    let out_dim: usize = kept.iter().map(|&i| dims[i]).product::<usize>().max(1);
    let d = m.dim();
    let mut out = ComplexMatrix::zeros(out_dim);
    let mut rc = vec![0usize; nf];
    let mut cc = vec![0usize; nf];
    for r in 0..d {
        decompose(r, dims, &mut rc);
        'cols: for c in 0..d {
            decompose(c, dims, &mut cc);
            let mut ro = 0usize;
            let mut co = 0usize;
            for f in 0..nf {
                if kept.contains(&f) {
                    ro = ro * dims[f] + rc[f];
                    co = co * dims[f] + cc[f];
                } else if rc[f] != cc[f] {
                    continue 'cols;
                }
            }
            let cur = out.get(ro, co);
            out.set(ro, co, cur + m.get(r, c));
        }
    }
    out
}

/// Partial transpose over the named parties: an exact entry permutation
/// (involution, no tolerance involved).
pub fn partial_transpose(
    op: &HermitianOperator,
    space: &TensorSpace,
    parties: &[&str],
) -> Result<HermitianOperator> {
    let pos = space.factor_indices(parties)?;
    Ok(HermitianOperator::new(pt_raw(op.matrix(), &space.dims(), &pos))
        .expect("partial transpose preserves Hermiticity"))
}

/// Raw partial transpose by factor positions.
pub(crate) fn pt_raw(m: &ComplexMatrix, dims: &[usize], which: &[usize]) -> ComplexMatrix {
    let nf = dims.len();
    let d = m.dim();
    let mut out = ComplexMatrix::zeros(d);
    let mut rc = vec![0usize; nf];
    let mut cc = vec![0usize; nf];
    for r in 0..d {
        decompose(r, dims, &mut rc);
        for c in 0..d {
            decompose(c, dims, &mut cc);
            let mut ro = 0usize;
            let mut co = 0usize;
            for f in 0..nf {
                let (rf, cf) = if which.contains(&f) {
                    (cc[f], rc[f]) // swap row/col digits of transposed factors
                } else {
                    (rc[f], cc[f])
                };
                ro = ro * dims[f] + rf;
                co = co * dims[f] + cf;
            }
            out.set(ro, co, m.get(r, c));
        }
    }
    out
}

/// Canonical-state selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateKind {
    /// Maximally entangled |φ⁺_d⟩ = (1/√d)Σ|ii⟩ on two d-dim parties.
    PhiPlus(usize),
    /// n-qubit GHZ state (|0…0⟩+|1…1⟩)/√2.
    Ghz(usize),
    /// Three-qubit W state (|001⟩+|010⟩+|100⟩)/√3.
    W3,
    /// Antisymmetric Werner state σ^a_d = 2 P^a_d/(d²−d).
    WernerAntisym(usize),
    /// Projector onto the antisymmetric subspace of d⊗d.
    ProjAntisym(usize),
    /// Projector onto the symmetric subspace of d⊗d.
    ProjSym(usize),
}

/// A canonical state or subspace projector with its space; pure states also
/// carry their amplitude vector.
#[derive(Debug, Clone)]
pub struct CanonicalState {
    /// Density matrix (unit trace) or projector (idempotent).
    pub op: HermitianOperator,
    /// The space the operator lives on.
    pub space: TensorSpace,
    /// Amplitudes when the state is pure.
    pub pure_state: Option<PureState>,
}

fn party_labels(n: usize) -> Result<Vec<String>> {
    if n > 26 {
        return Err(Error::InvalidParameter(format!(
            "cannot label {n} parties with single letters"
        )));
    }
    Ok((0..n).map(|i| ((b'A' + i as u8) as char).to_string()).collect())
}

/// SWAP operator on d⊗d.
fn swap_matrix(d: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(d * d);
    for i in 0..d {
        for j in 0..d {
            m.set(i * d + j, j * d + i, Complex64::new(1.0, 0.0));
        }
    }
    m
}

/// Builds a canonical state (unit trace) or subspace projector (idempotent).
pub fn canonical_state(kind: StateKind) -> Result<CanonicalState> {
    match kind {
        StateKind::PhiPlus(d) => {
            if d < 2 {
                return Err(Error::InvalidParameter("phi_plus requires d >= 2".into()));
            }
            let space = TensorSpace::new(vec![("A".into(), d), ("B".into(), d)])?;
            let amp = 1.0 / (d as f64).sqrt();
            let mut v = vec![Complex64::new(0.0, 0.0); d * d];
            for i in 0..d {
                v[i * d + i] = Complex64::new(amp, 0.0);
            }
            let pure = PureState::new(space.clone(), v)?;
            Ok(CanonicalState {
                op: pure.density(),
                space,
                pure_state: Some(pure),
            })
        }
        StateKind::Ghz(n) => {
            if n < 2 {
                return Err(Error::InvalidParameter("ghz requires n >= 2".into()));
            }
            let labels = party_labels(n)?;
            let space =
                TensorSpace::new(labels.into_iter().map(|l| (l, 2)).collect())?;
            let dim = space.total_dim();
            let amp = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            let mut v = vec![Complex64::new(0.0, 0.0); dim];
            v[0] = amp;
            v[dim - 1] = amp;
            let pure = PureState::new(space.clone(), v)?;
            Ok(CanonicalState {
                op: pure.density(),
                space,
                pure_state: Some(pure),
            })
        }
        StateKind::W3 => {
            let space = TensorSpace::qubits(&["A", "B", "C"])?;
            let amp = Complex64::new(1.0 / 3f64.sqrt(), 0.0);
            let mut v = vec![Complex64::new(0.0, 0.0); 8];
            v[1] = amp;
            v[2] = amp;
            v[4] = amp;
            let pure = PureState::new(space.clone(), v)?;
            Ok(CanonicalState {
                op: pure.density(),
                space,
                pure_state: Some(pure),
            })
        }
        StateKind::WernerAntisym(d) => {
            if d < 2 {
                return Err(Error::InvalidParameter(
                    "werner_antisym requires d >= 2".into(),
                ));
            }
            let proj = canonical_state(StateKind::ProjAntisym(d))?;
            let rank = d * (d - 1) / 2;
            let op = HermitianOperator::new(proj.op.matrix().scale(1.0 / rank as f64))
                .expect("scaled projector is Hermitian");
            Ok(CanonicalState {
                op,
                space: proj.space,
                pure_state: None,
            })
        }
        StateKind::ProjAntisym(d) | StateKind::ProjSym(d) => {
            if d < 2 {
                return Err(Error::InvalidParameter("projector requires d >= 2".into()));
            }
            let space = TensorSpace::new(vec![("A".into(), d), ("B".into(), d)])?;
            let sign = if matches!(kind, StateKind::ProjAntisym(_)) {
                -1.0
            } else {
                1.0
            };
            let m = ComplexMatrix::identity(d * d)
                .add(&swap_matrix(d).scale(sign))
                .scale(0.5);
            Ok(CanonicalState {
                op: HermitianOperator::new(m).expect("projector is Hermitian"),
                space,
                pure_state: None,
            })
        }
    }
}

/// Negativity across a cut: `(‖op^{Γ_cut}‖₁ − 1)/2`; zero exactly when the
/// partial transpose stays PSD.
pub fn negativity(op: &HermitianOperator, space: &TensorSpace, cut: &[&str]) -> Result<f64> {
    let pt = partial_transpose(op, space, cut)?;
    Ok((trace_norm(&pt)? - 1.0) / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator_core::{is_psd, ToleranceConfig};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn phi_plus(d: usize) -> CanonicalState {
        canonical_state(StateKind::PhiPlus(d)).unwrap()
    }

    #[test]
    fn tensor_product_identities() {
        let i2 = HermitianOperator::new(ComplexMatrix::identity(2)).unwrap();
        let i4 = tensor_product(&i2, &i2);
        assert_eq!(i4.matrix(), &ComplexMatrix::identity(4));

        // |0><0| x |1><1| = |01><01|
        let mut p0 = ComplexMatrix::zeros(2);
        p0.set(0, 0, c(1.0, 0.0));
        let mut p1 = ComplexMatrix::zeros(2);
        p1.set(1, 1, c(1.0, 0.0));
        let prod = tensor_product(
            &HermitianOperator::new(p0).unwrap(),
            &HermitianOperator::new(p1).unwrap(),
        );
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == 1 && j == 1 { 1.0 } else { 0.0 };
                assert_eq!(prod.matrix().get(i, j), c(expect, 0.0));
            }
        }
    }

    /// P⁺₂ ⊗ P⁺₂ has entry 1/4 exactly at row/col indices built from the
    /// {00,11}×{00,11} diagonal pairs.
    #[test]
    fn tensor_product_of_maximally_entangled_pair() {
        let p = phi_plus(2);
        let big = tensor_product(&p.op, &p.op);
        let hot = [0usize, 3];
        for r in 0..16 {
            for cidx in 0..16 {
                let (r1, r2) = (r / 4, r % 4);
                let (c1, c2) = (cidx / 4, cidx % 4);
                let expect = if hot.contains(&r1)
                    && hot.contains(&r2)
                    && hot.contains(&c1)
                    && hot.contains(&c2)
                {
                    0.25
                } else {
                    0.0
                };
                assert!((big.matrix().get(r, cidx).re - expect).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn partial_trace_of_entangled_state_is_maximally_mixed() {
        let p = phi_plus(2);
        let red = partial_trace(&p.op, &p.space, &["A"]).unwrap();
        let expect = ComplexMatrix::identity(2).scale(0.5);
        assert!(red.matrix().sub(&expect).max_abs_entry() < 1e-15);
    }

    #[test]
    fn partial_trace_of_product_factorizes() {
        let p = phi_plus(2);
        let mut sigma = ComplexMatrix::zeros(2);
        sigma.set(0, 0, c(0.75, 0.0));
        sigma.set(1, 1, c(0.25, 0.0));
        sigma.set(0, 1, c(0.1, 0.2));
        sigma.set(1, 0, c(0.1, -0.2));
        let sigma = HermitianOperator::new(sigma).unwrap();
        let joint = tensor_product(&p.op, &sigma);
        let space = p
            .space
            .join(&TensorSpace::new(vec![("C".into(), 2)]).unwrap())
            .unwrap();
        let back = partial_trace(&joint, &space, &["A", "B"]).unwrap();
        assert!(back.matrix().sub(p.op.matrix()).max_abs_entry() < 1e-12);
        let other = partial_trace(&joint, &space, &["C"]).unwrap();
        // trace preserved overall
        assert!((other.matrix().trace().re - 1.0).abs() < 1e-12);
        assert!(other.matrix().sub(sigma.matrix()).max_abs_entry() < 1e-12);
    }

    #[test]
    fn partial_transpose_is_involution() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let space = TensorSpace::new(vec![("A".into(), 2), ("B".into(), 3)]).unwrap();
        let raw = ComplexMatrix::from_fn(6, |_, _| c(rng.gen(), rng.gen()));
        let op = HermitianOperator::new(raw.hermitian_part()).unwrap();
        let once = partial_transpose(&op, &space, &["A"]).unwrap();
        let twice = partial_transpose(&once, &space, &["A"]).unwrap();
        // exact involution: entry permutation only
        assert_eq!(op.matrix(), twice.matrix());
    }

    #[test]
    fn partial_transposes_commute_across_parties() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let space = TensorSpace::qubits(&["A", "B", "C"]).unwrap();
        let raw = ComplexMatrix::from_fn(8, |_, _| c(rng.gen(), rng.gen()));
        let op = HermitianOperator::new(raw.hermitian_part()).unwrap();
        let ab = partial_transpose(
            &partial_transpose(&op, &space, &["A"]).unwrap(),
            &space,
            &["B"],
        )
        .unwrap();
        let ba = partial_transpose(
            &partial_transpose(&op, &space, &["B"]).unwrap(),
            &space,
            &["A"],
        )
        .unwrap();
        assert_eq!(ab.matrix(), ba.matrix());
        let joint = partial_transpose(&op, &space, &["A", "B"]).unwrap();
        assert_eq!(ab.matrix(), joint.matrix());
    }

    #[test]
    fn partial_transpose_of_phi_plus_spectrum() {
        let p = phi_plus(2);
        let pt = partial_transpose(&p.op, &p.space, &["A"]).unwrap();
        let eig = crate::operator_core::hermitian_eig(&pt).unwrap();
        let expect = [-0.5, 0.5, 0.5, 0.5];
        for (v, e) in eig.values.iter().zip(expect) {
            assert!((v - e).abs() < 1e-12);
        }
    }

    #[test]
    fn ghz_and_w_amplitudes_match_references() {
        let ghz = canonical_state(StateKind::Ghz(3)).unwrap();
        let amps = ghz.pure_state.as_ref().unwrap().amplitudes();
        let r = 0.5f64.sqrt();
        assert!((amps[0].re - r).abs() < 1e-15);
        assert!((amps[7].re - r).abs() < 1e-15);
        assert_eq!(amps[1], c(0.0, 0.0));

        let w = canonical_state(StateKind::W3).unwrap();
        let wa = w.pure_state.as_ref().unwrap().amplitudes();
        let t = (1.0f64 / 3.0).sqrt();
        for idx in [1usize, 2, 4] {
            assert!((wa[idx].re - t).abs() < 1e-15);
        }
        assert_eq!(wa[0], c(0.0, 0.0));
        assert_eq!(wa[7], c(0.0, 0.0));
    }

    #[test]
    fn canonical_states_unit_trace_psd_projectors_idempotent() {
        let tol = ToleranceConfig::default();
        for kind in [
            StateKind::PhiPlus(2),
            StateKind::PhiPlus(3),
            StateKind::Ghz(3),
            StateKind::W3,
            StateKind::WernerAntisym(2),
            StateKind::WernerAntisym(3),
        ] {
            let s = canonical_state(kind).unwrap();
            assert!(
                (s.op.matrix().trace().re - 1.0).abs() < 1e-12,
                "{kind:?} not unit trace"
            );
            assert!(is_psd(&s.op, &tol).unwrap().is_psd, "{kind:?} not PSD");
        }
        for d in [2usize, 3, 4] {
            let pa = canonical_state(StateKind::ProjAntisym(d)).unwrap();
            let ps = canonical_state(StateKind::ProjSym(d)).unwrap();
            for p in [&pa, &ps] {
                let sq = p.op.matrix().matmul(p.op.matrix());
                assert!(sq.sub(p.op.matrix()).max_abs_entry() < 1e-12);
            }
            let sum = pa.op.matrix().add(ps.op.matrix());
            assert!(
                sum.sub(&ComplexMatrix::identity(d * d)).max_abs_entry() < 1e-15
            );
            // antisymmetric rank d(d-1)/2
            assert!(
                (pa.op.matrix().trace().re - (d * (d - 1) / 2) as f64).abs() < 1e-12
            );
        }
    }

    #[test]
    fn werner_antisym_d2_is_singlet() {
        let w = canonical_state(StateKind::WernerAntisym(2)).unwrap();
        // |psi-> = (|01> - |10>)/sqrt(2)
        let mut expect = ComplexMatrix::zeros(4);
        expect.set(1, 1, c(0.5, 0.0));
        expect.set(2, 2, c(0.5, 0.0));
        expect.set(1, 2, c(-0.5, 0.0));
        expect.set(2, 1, c(-0.5, 0.0));
        assert!(w.op.matrix().sub(&expect).max_abs_entry() < 1e-15);
    }

    #[test]
    fn negativity_values() {
        // separable product state has zero negativity
        let mut rho = ComplexMatrix::zeros(4);
        rho.set(0, 0, c(0.5, 0.0));
        rho.set(3, 3, c(0.5, 0.0));
        let space = TensorSpace::qubits(&["A", "B"]).unwrap();
        let op = HermitianOperator::new(rho).unwrap();
        assert!(negativity(&op, &space, &["A"]).unwrap().abs() < 1e-12);
        // N(phi_plus(d)) = (d-1)/2
        for d in [2usize, 3, 4, 5] {
            let p = phi_plus(d);
            let n = negativity(&p.op, &p.space, &["A"]).unwrap();
            assert!(
                (n - (d as f64 - 1.0) / 2.0).abs() < 1e-10,
                "d={d}: negativity {n}"
            );
        }
    }

    #[test]
    fn unknown_party_label_is_reported() {
        let p = phi_plus(2);
        assert!(matches!(
            partial_trace(&p.op, &p.space, &["Z"]),
            Err(Error::UnknownParty { .. })
        ));
    }

    #[test]
    fn space_validation() {
        assert!(TensorSpace::new(vec![("A".into(), 2), ("A".into(), 2)]).is_err());
        assert!(TensorSpace::new(vec![("A".into(), 0)]).is_err());
        let s = TensorSpace::new(vec![("A".into(), 2), ("B".into(), 3), ("C".into(), 1)])
            .unwrap();
        assert_eq!(s.total_dim(), 6);
    }
}
