//! Exact computation of quasi-isometry invariants for nonpolycyclic
//! nilpotent-by-cyclic groups `N *_phi`, given the Lie algebra of `N` by
//! structure constants and `phi` by its induced matrix.
//!
//! The crate is `no_std` (it needs `alloc`). All invariant decisions are made
//! in exact arithmetic: rationals, real algebraic numbers, and quotient rings
//! `Q[x]/(c)` for eigenvalue computations. Floating point is only used by the
//! [`oracle`] module and by [`lie_algebra::nilpotent_norm`], which are
//! estimates by nature.
//!
//! Module map:
//! - [`scalar`]: rationals, polynomials, real root isolation, algebraic reals.
//! - [`lie_algebra`]: structure constants, lower central series, weights.
//! - [`endomorphism`]: the matrix of `phi*` and its standing-assumption checks.
//! - [`jordan`]: characteristic polynomials, Jordan block data, absolute form.
//! - [`pajf`]: filtration-adapted Jordan bases and the permuted absolute form.
//! - [`growth`]: divergence rates and growth-space filtrations.
//! - [`classifier`]: verdicts with an evidence trail.
//! - [`oracle`]: numeric flow-line simulation validating symbolic rates.

#![no_std]
#![allow(clippy::needless_range_loop)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod classifier;
pub mod endomorphism;
mod error;
pub mod field;
pub mod growth;
pub mod jordan;
pub mod lie_algebra;
pub mod matrix;
pub mod oracle;
pub mod pajf;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{AlgebraicReal, Rational};
