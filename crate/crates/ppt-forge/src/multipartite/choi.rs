//! Choi isomorphism: operators on V⊗V′ as linear maps from operators on V
//! to operators on V′, plus the success/leakage functionals of the
//! conversion problems.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::multipartite::{PureState, TensorSpace};
use crate::operator_core::{ComplexMatrix, HermitianOperator};

/// One party's position in the input and output spaces; the input factor is
/// absent for output-only parties (trivial input, as in P⁺_AB → GHZ_ABC).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartyPairing {
    /// Party label shared by both spaces.
    pub label: String,
    /// Factor position in the input space, when the party has one.
    pub input_factor: Option<usize>,
    /// Factor position in the output space.
    pub output_factor: usize,
}

/// Operator on V⊗V′ together with the space metadata that fixes its
/// interpretation as a map from operators on V to operators on V′.
#[derive(Debug, Clone)]
pub struct ChoiOperator {
    op: HermitianOperator,
    input_space: TensorSpace,
    output_space: TensorSpace,
    pairing: Vec<PartyPairing>,
}

impl ChoiOperator {
    /// Wraps an operator with its input/output spaces. The party pairing is
    /// derived by matching labels; every output party must either match an
    /// input factor or have no input factor at all.
    pub fn new(
        op: HermitianOperator,
        input_space: TensorSpace,
        output_space: TensorSpace,
    ) -> Result<Self> {
        let expected = input_space.total_dim() * output_space.total_dim();
        if op.dim() != expected {
            return Err(Error::DimensionMismatch {
                context: "ChoiOperator::new",
                expected,
                got: op.dim(),
            });
        }
        let mut pairing = Vec::new();
        for (out_idx, (label, _)) in output_space.factors().iter().enumerate() {
            let input_factor = input_space.factor_index(label).ok();
            pairing.push(PartyPairing {
                label: label.clone(),
                input_factor,
                output_factor: out_idx,
            });
        }
        Ok(ChoiOperator {
            op,
            input_space,
            output_space,
            pairing,
        })
    }

    /// The operator on V⊗V′.
    pub fn op(&self) -> &HermitianOperator {
        &self.op
    }

    /// Input space V.
    pub fn input_space(&self) -> &TensorSpace {
        &self.input_space
    }

    /// Output space V′.
    pub fn output_space(&self) -> &TensorSpace {
        &self.output_space
    }

    /// Label-derived party pairing, ordered by output factor.
    pub fn pairing(&self) -> &[PartyPairing] {
        &self.pairing
    }

    /// The joint space V⊗V′ with output labels primed so they stay unique
    /// (e.g. input `A` and output `A'`).
    pub fn joint_space(&self) -> TensorSpace {
        let mut factors: Vec<(String, usize)> = self.input_space.factors().to_vec();
        factors.extend(
            self.output_space
                .factors()
                .iter()
                .map(|(l, d)| (format!("{l}'"), *d)),
        );
        TensorSpace::new(factors).expect("primed labels are unique")
    }
}

/// Applies the map defined by a Choi operator:
/// `Ψ(A)[j,j'] = Σ_{i,i'} Ω[(i,j),(i',j')] A[i',i]`.
pub fn choi_apply(choi: &ChoiOperator, rho: &HermitianOperator) -> Result<HermitianOperator> {
    let dv = choi.input_space.total_dim();
    let dw = choi.output_space.total_dim();
    if rho.dim() != dv {
        return Err(Error::DimensionMismatch {
            context: "choi_apply",
            expected: dv,
            got: rho.dim(),
        });
    }
    let om = choi.op.matrix();
    let a = rho.matrix();
    let mut out = ComplexMatrix::zeros(dw);
    for i in 0..dv {
        for ip in 0..dv {
            let aval = a.get(ip, i);
            if aval.re == 0.0 && aval.im == 0.0 {
                continue;
            }
            for j in 0..dw {
                for jp in 0..dw {
                    let cur = out.get(j, jp);
                    out.set(j, jp, cur + om.get(i * dw + j, ip * dw + jp) * aval);
                }
            }
        }
    }
    Ok(HermitianOperator::new(out).expect("Choi application preserves Hermiticity"))
}

/// Success probability and leakage of a conversion attempt.
#[derive(Debug, Clone, Copy)]
pub struct SuccessProbability {
    /// p = tr{Ω ρ⊗σ}.
    pub probability: f64,
    /// Exactness residual tr{Ω ρ⊗(1−σ)}; zero for exact conversions.
    pub leakage: f64,
}

/// Evaluates `p = tr{Ω ρ⊗σ}` and the leakage `tr{Ω ρ⊗(1−σ)}` for a pure
/// target σ.
pub fn success_probability(
    choi: &ChoiOperator,
    rho: &HermitianOperator,
    sigma: &PureState,
) -> Result<SuccessProbability> {
    let dv = choi.input_space.total_dim();
    let dw = choi.output_space.total_dim();
    if rho.dim() != dv {
        return Err(Error::DimensionMismatch {
            context: "success_probability: input state",
            expected: dv,
            got: rho.dim(),
        });
    }
    if sigma.amplitudes().len() != dw {
        return Err(Error::DimensionMismatch {
            context: "success_probability: target state",
            expected: dw,
            got: sigma.amplitudes().len(),
        });
    }
    let sig = sigma.density();
    let target = rho.matrix().kron(sig.matrix());
    let probability = choi.op.matrix().trace_product_re(&target);
    let all = rho.matrix().kron(&ComplexMatrix::identity(dw));
    let total = choi.op.matrix().trace_product_re(&all);
    Ok(SuccessProbability {
        probability,
        leakage: total - probability,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipartite::{canonical_state, tensor_product, StateKind};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn qubit_pair_space() -> (TensorSpace, TensorSpace) {
        (
            TensorSpace::new(vec![("A".into(), 2)]).unwrap(),
            TensorSpace::new(vec![("A".into(), 2)]).unwrap(),
        )
    }

    #[test]
    fn constant_map_from_identity_tensor_sigma() {
        let mut sigma = ComplexMatrix::zeros(2);
        sigma.set(0, 0, c(0.25, 0.0));
        sigma.set(1, 1, c(0.75, 0.0));
        sigma.set(0, 1, c(0.1, 0.05));
        sigma.set(1, 0, c(0.1, -0.05));
        let sigma = HermitianOperator::new(sigma).unwrap();
        let i2 = HermitianOperator::new(ComplexMatrix::identity(2)).unwrap();
        let om = tensor_product(&i2, &sigma);
        let (vin, vout) = qubit_pair_space();
        let choi = ChoiOperator::new(om, vin, vout).unwrap();

        let mut rho = ComplexMatrix::zeros(2);
        rho.set(0, 0, c(0.5, 0.0));
        rho.set(1, 1, c(0.5, 0.0));
        rho.set(0, 1, c(0.0, 0.3));
        rho.set(1, 0, c(0.0, -0.3));
        let rho = HermitianOperator::new(rho).unwrap();
        let out = choi_apply(&choi, &rho).unwrap();
        // rho has unit trace, so the output should equal sigma exactly
        assert!(out.matrix().sub(sigma.matrix()).max_abs_entry() < 1e-14);
    }

    #[test]
    fn swap_choi_is_identity_map() {
        let d = 3usize;
        let mut swap = ComplexMatrix::zeros(d * d);
        for i in 0..d {
            for j in 0..d {
                swap.set(i * d + j, j * d + i, c(1.0, 0.0));
            }
        }
        let vin = TensorSpace::new(vec![("A".into(), d)]).unwrap();
        let vout = TensorSpace::new(vec![("A".into(), d)]).unwrap();
        let choi =
            ChoiOperator::new(HermitianOperator::new(swap).unwrap(), vin, vout).unwrap();
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let raw = ComplexMatrix::from_fn(d, |_, _| c(rng.gen(), rng.gen()));
        let rho = HermitianOperator::new(raw.hermitian_part()).unwrap();
        let out = choi_apply(&choi, &rho).unwrap();
        assert!(out.matrix().sub(rho.matrix()).max_abs_entry() < 1e-14);
    }

    /// tr{Ψ(A)·B} = tr{Ω·(A⊗B)} for random Hermitian Ω, A, B.
    #[test]
    fn isomorphism_round_trip() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..20 {
            let (dv, dw) = (2usize, 3usize);
            let vin = TensorSpace::new(vec![("A".into(), dv)]).unwrap();
            let vout = TensorSpace::new(vec![("A".into(), dw)]).unwrap();
            let raw = ComplexMatrix::from_fn(dv * dw, |_, _| {
                c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
            });
            let om = HermitianOperator::new(raw.hermitian_part()).unwrap();
            let choi = ChoiOperator::new(om.clone(), vin, vout).unwrap();
            let a_raw = ComplexMatrix::from_fn(dv, |_, _| c(rng.gen(), rng.gen()));
            let b_raw = ComplexMatrix::from_fn(dw, |_, _| c(rng.gen(), rng.gen()));
            let a = HermitianOperator::new(a_raw.hermitian_part()).unwrap();
            let b = HermitianOperator::new(b_raw.hermitian_part()).unwrap();
            let lhs = choi_apply(&choi, &a)
                .unwrap()
                .matrix()
                .trace_product_re(b.matrix());
            let rhs = om.matrix().trace_product_re(&a.matrix().kron(b.matrix()));
            let scale = om.matrix().frobenius_norm().max(1.0);
            assert!(
                (lhs - rhs).abs() <= 1e-9 * scale,
                "round trip mismatch: {lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn identity_choi_success_probability_is_one() {
        let p2 = canonical_state(StateKind::PhiPlus(2)).unwrap();
        let vin = TensorSpace::new(vec![("A".into(), 4)]).unwrap();
        let vout = TensorSpace::new(vec![("A".into(), 4)]).unwrap();
        let om = HermitianOperator::new(ComplexMatrix::identity(16)).unwrap();
        let choi = ChoiOperator::new(om, vin, vout).unwrap();
        let target = PureState::new(
            TensorSpace::new(vec![("T".into(), 4)]).unwrap(),
            p2.pure_state.as_ref().unwrap().amplitudes().to_vec(),
        )
        .unwrap();
        let sp = success_probability(&choi, &p2.op, &target).unwrap();
        assert!((sp.probability - 1.0).abs() < 1e-12);
        // leakage = tr(rho) * (dim - 1) for the identity operator
        assert!((sp.leakage - 3.0).abs() < 1e-12);
    }

    /// The §V-form bipartite certificate for d=2, d′=3 converts P⁺₂ into
    /// (1/2)·P⁺₃ with zero leakage; the success probability is 1/2.
    #[test]
    fn bipartite_certificate_application() {
        let p2 = canonical_state(StateKind::PhiPlus(2)).unwrap();
        let p3 = canonical_state(StateKind::PhiPlus(3)).unwrap();
        let i4 = ComplexMatrix::identity(4);
        let i9 = ComplexMatrix::identity(9);
        let comp2 = i4.sub(p2.op.matrix());
        let comp3 = i9.sub(p3.op.matrix());
        let om = p2
            .op
            .matrix()
            .kron(p3.op.matrix())
            .scale(0.5)
            .add(&comp2.kron(&comp3).scale(1.0 / 8.0));
        let vin = TensorSpace::new(vec![("A".into(), 2), ("B".into(), 2)]).unwrap();
        let vout = TensorSpace::new(vec![("A".into(), 3), ("B".into(), 3)]).unwrap();
        let choi =
            ChoiOperator::new(HermitianOperator::new(om).unwrap(), vin, vout).unwrap();

        let out = choi_apply(&choi, &p2.op).unwrap();
        let expect = p3.op.matrix().scale(0.5);
        assert!(out.matrix().sub(&expect).max_abs_entry() < 1e-12);

        let target = PureState::new(
            TensorSpace::new(vec![("T".into(), 9)]).unwrap(),
            p3.pure_state.as_ref().unwrap().amplitudes().to_vec(),
        )
        .unwrap();
        let sp = success_probability(&choi, &p2.op, &target).unwrap();
        assert!((sp.probability - 0.5).abs() < 1e-12);
        assert!(sp.leakage.abs() < 1e-12);
    }

    #[test]
    fn pairing_handles_output_only_parties() {
        let vin = TensorSpace::qubits(&["A", "B"]).unwrap();
        let vout = TensorSpace::qubits(&["A", "B", "C"]).unwrap();
        let om = HermitianOperator::new(ComplexMatrix::identity(32)).unwrap();
        let choi = ChoiOperator::new(om, vin, vout).unwrap();
        let pairing = choi.pairing();
        assert_eq!(pairing.len(), 3);
        assert_eq!(pairing[0].input_factor, Some(0));
        assert_eq!(pairing[1].input_factor, Some(1));
        assert_eq!(pairing[2].input_factor, None);
        assert_eq!(pairing[2].label, "C");
        let joint = choi.joint_space();
        assert_eq!(joint.total_dim(), 32);
        assert_eq!(joint.factors()[2].0, "A'");
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let vin = TensorSpace::qubits(&["A"]).unwrap();
        let vout = TensorSpace::qubits(&["A"]).unwrap();
        let om = HermitianOperator::new(ComplexMatrix::identity(8)).unwrap();
        assert!(matches!(
            ChoiOperator::new(om, vin, vout),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
