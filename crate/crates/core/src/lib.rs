//! Quantum Bayesian retrodiction with extended prior beliefs.
//!
//! A belief about a system `S` is a joint state on `S ⊗ R`, where `R` is a
//! hidden register that may be classical (proper mixtures) or quantum
//! (improper mixtures). This crate provides:
//!
//! - [`linalg`]: a small dense complex matrix type with the Hermitian
//!   eigendecomposition, operator square roots, partial traces and the
//!   double-ket vectorization everything else is built on.
//! - [`model`]: density operators, channels in Kraus form, POVMs, beliefs,
//!   ensembles and the built-in objects (`beta-s`, `beta-1`, `beta-2`,
//!   `beta-xyz`, `beta-sic`).
//! - [`retrodiction`]: the Petz map, the prior-extended Petz map and the
//!   materialized recovery channel `R_ext ∘ E`.
//! - [`equivalence`]: belief signatures, the equivalence test, ensemble
//!   moments and a brute-force channel-battery oracle.
//! - [`classical`]: Bayes/Jeffrey soft-evidence updates.
//! - [`scenarios`] and [`checks`]: the reference table of updated beliefs,
//!   depolarizing-recovery curves and the randomized invariant suite.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod checks;
pub mod classical;
pub mod equivalence;
mod error;
pub mod linalg;
pub mod model;
pub mod random;
pub mod retrodiction;
pub mod scenarios;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, HermitianEigensystem, C64};
pub use model::{Belief, BuiltinBelief, DensityOperator, Povm, QuantumChannel, StateEnsemble};
