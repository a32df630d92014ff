//! Discrete period matrices of polyhedral surfaces.
//!
//! The pipeline runs on a [`conformal::WeightedSurfaceGraph`]: a closed
//! oriented cellular surface `Γ` whose edges carry positive weights `ρ`,
//! together with the dual graph `Γ*`, the double graph `Λ = Γ ⊔ Γ*` and the
//! quad-graph `◊` whose faces have one primal and one dual edge as diagonals.
//!
//! 1. [`homology`] extracts a rooted homology basis on `◊` and brings it to
//!    symplectic form.
//! 2. [`harmonic`] solves, for every basis cycle, the real harmonic form with
//!    prescribed periods on `Γ` (and on `Γ*` for the dual route).
//! 3. [`periods`] combines them into the normalized holomorphic basis and
//!    reads off the period matrices `Π` and `Π*`.
//! 4. [`siegel`] maps period matrices to a canonical representative so that
//!    results from different bases can be compared entrywise.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod conformal;
pub mod dec;
mod error;
#[cfg(test)]
mod fixtures;
pub mod harmonic;
pub mod homology;
pub mod linalg;
pub mod mesh;
pub mod periods;
pub mod siegel;
pub mod solver;
pub mod surfaces;

pub use error::{DelaunayEdge, Error, Result};
pub use num_complex::Complex64;

/// Complex scalar used for every cochain value.
pub type C64 = Complex64;
