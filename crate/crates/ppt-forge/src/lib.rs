//! ppt-forge: optimal single-copy entanglement conversion under
//! PPT-preserving operations.
//!
//! The crate computes and certifies the optimal success probabilities for
//! converting one entangled state into another by completely positive maps
//! whose Choi operators respect positivity under partial transposition
//! (PPT operations), in both the trace-preserving and trace-non-preserving
//! schemes.  It ships:
//!
//! * dense complex Hermitian linear algebra with an in-house eigensolver
//!   ([`operator_core`]),
//! * tensor-space bookkeeping, partial trace/transpose and the Choi
//!   isomorphism ([`multipartite`]),
//! * finite-group and analytic twirling for symmetry reduction
//!   ([`symmetry`]),
//! * in-house simplex and primal-dual interior-point solvers plus the
//!   conversion-problem builder ([`optimize`]),
//! * every explicit primal/dual certificate with verification, closed-form
//!   probability formulas, convertibility decisions and the high-rank
//!   distillation no-go experiment ([`certificates`]),
//! * JSON (de)serialization of matrices, states and reports ([`io`]).

pub mod certificates;
pub mod error;
pub mod io;
pub mod multipartite;
pub mod operator_core;
pub mod optimize;
pub mod symmetry;

pub use error::{Error, Result};
pub use operator_core::{ComplexMatrix, HermitianOperator, ToleranceConfig};
