//! Density-matrix toolkit for benchmarking a three-qubit teleportation circuit.
//!
//! The crate is organised bottom-up:
//!
//! - [`qops`]: dense complex linear algebra and state primitives (tensor
//!   products, partial traces, Pauli operators, projection onto physical states).
//! - [`circuit`]: gates, the teleportation circuit in its textbook and
//!   C-Phase-compiled forms, T1/T2* Kraus noise and the avoided-crossing
//!   C-Phase model.
//! - [`tomography`]: Pauli readout sampling, linear inversion and
//!   maximum-likelihood reconstruction.
//! - [`entanglement`]: concurrence, three-tangle, convex-roof upper bound and
//!   the fidelity witness.
//! - [`teleport`]: conditional projections, single-qubit process tomography and
//!   the end-to-end benchmark report.
//!
//! Basis ordering is big-endian throughout: qubit A is the most significant
//! bit, so `|abc>` sits at index `4a + 2b + c`.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod circuit;
pub mod entanglement;
mod error;
pub mod qops;
pub mod teleport;
pub mod tomography;

pub use error::{Error, Result};
pub use qops::{ComplexMatrix, DensityMatrix, Ket, PauliString};

/// Tolerance for structural invariants (Hermiticity, trace, positivity).
pub const STRUCT_TOL: f64 = 1e-9;
/// Tolerance for validating user-facing inputs.
pub const INPUT_TOL: f64 = 1e-6;
