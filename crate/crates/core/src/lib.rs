//! Analysis of finite set-theoretic Yang-Baxter solutions and, more
//! generally, finite algebras with binary operations.
//!
//! The crate verifies the braid relation and its componentwise identities,
//! computes the maximal congruence below the coinciding-maps equivalence by
//! partition refinement, builds retract towers and multipermutation levels,
//! decides `k`-permutability through tower equations with word quantification
//! over a transformation monoid, and enumerates all solutions on small
//! carriers with a pruned backtracking search.
//!
//! Everything is a pure function over immutable values; sharing across
//! threads needs no coordination.

pub mod algebra;
pub mod enumeration;
pub mod error;
pub mod files;
pub mod partition;
pub mod permutational;
pub mod retraction;
pub mod solution;

pub use algebra::{BinaryAlgebra, CurrySide, OpTable, UnaryMap};
pub use error::{Error, Result};
pub use partition::Partition;
pub use solution::{samples, Classification, IdentityChecks, Solution};
