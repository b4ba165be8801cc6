//! Exact, desk-scale verification of the level-0 coefficient-system
//! resolution for `GL(N)` over a p-adic field.
//!
//! The crate is organised bottom-up:
//!
//! * [`affine_weyl`] models the affine Weyl group of type `Ã_{N-1}` as affine
//!   permutations.
//! * [`apartment`] is the standard apartment as a simplicial complex, with
//!   incidence numbers, convex truncations and rational chain complexes.
//! * [`convexity`] covers affine roots, enclosures, projection chambers and the
//!   gate/dichotomy sweeps.
//! * [`hecke`] is the Iwahori–Matsumoto presentation of the Iwahori–Hecke
//!   algebra with symbolic or specialised `q`.
//! * [`residue`] works inside the finite congruence quotients
//!   `GL(N, Z/p^m)`: lattice chains, parahoric images, group-algebra
//!   convolution and the brute-force idempotent checks.
//! * [`assembly`] builds the invariant chain complex, the comparison maps to
//!   the apartment complex and the exactness certificate.
//!
//! Everything is computed over exact rationals.

pub mod affine_weyl;
pub mod apartment;
pub mod assembly;
pub mod certificate;
pub mod convexity;
pub mod error;
pub mod exec;
pub mod hecke;
pub mod linalg;
pub mod rational;
pub mod residue;

pub use error::{Error, Result};
pub use rational::Q;
