//! Exact simulation of unitary linear networks fed with partially
//! indistinguishable bosons.
//!
//! The library computes output probability distributions of an `M`-mode
//! network for `N` bosons whose internal (non-network) degrees of freedom are
//! only partially indistinguishable, and evaluates how far such a device sits
//! from the ideal bosonic network:
//!
//! - exact postselected distributions for general mixed internal states,
//!   via two independent formulas that cross-validate each other;
//! - the trace-distance bound `D <= 1 - p_s` and the per-configuration bound
//!   against the classical (fully distinguishable) distribution;
//! - the bunched-output estimator that recovers `p_s` from a single output
//!   probability;
//! - a first-order expansion of `1 - p_s` for nearly ideal inputs;
//! - a seeded Monte-Carlo probe of the worst-case distance achievable by
//!   inputs orthogonal to the symmetric subspace.
//!
//! Everything is exact enumeration at desk scale (`N <= 6` or so); there is
//! no sampling from the distributions themselves.

pub mod bounds;
pub mod combinatorics;
pub mod distributions;
pub mod instance;
pub mod internal_state;
pub mod jmatrix;
pub mod linalg;
pub mod oracle;
pub mod permanent;
pub mod probe;

mod error;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};

pub use combinatorics::{Configuration, Permutation};
pub use distributions::Distribution;
pub use internal_state::{DetectorModel, GramMatrix, MixedInternalState, PureProductState};
pub use jmatrix::{JMatrix, NormalizedJMatrix};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;

/// Dense complex vector.
pub type CVector = nalgebra::DVector<C64>;
