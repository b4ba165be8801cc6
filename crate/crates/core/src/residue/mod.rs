//! Finite congruence quotients `G_m = GL(N, Z/p^m)` and the brute-force
//! checks that live inside them.
//!
//! Every subgroup here is a subgroup of `G_m`, i.e. the image of its
//! intersection with `GL(N, O)`.

pub mod algebra;
pub mod cache;
pub mod context;
pub mod group;
pub mod lattice;
pub mod lemmas;
pub mod matrix;
pub mod module;
pub mod subgroup;

pub use algebra::GroupAlgebraElement;
pub use cache::{CacheEntry, GroupCache};
pub use context::ResidueContext;
pub use group::{FiniteGroup, GroupSpec, Subgroup, DEFAULT_BUDGET};
pub use lattice::{ChainSimplex, Lattice};
pub use matrix::MatrixModPm;
pub use module::{fixed_vectors, permutation_module, FiniteModule, FixedSpace};
pub use subgroup::{subgroup_of_simplex, ParahoricPair, SubgroupKind};
