//! Canonizing symmetry-breaking constraints for small graph and
//! fully-interchangeable matrix search problems.
//!
//! A graph on `n` vertices is identified with the row-major string of the
//! upper triangle of its adjacency matrix. A graph is *canonical* when that
//! string is lexicographically least among all relabelings. A set of vertex
//! permutations `Π` is *canonizing* when `G ⪯ π(G)` for every `π ∈ Π` already
//! implies that `G` is canonical. This crate computes such sets with a SAT
//! oracle (counterexample-guided, then reduced to an irredundant set) and
//! compiles them to CNF so that any solver enumerates exactly one
//! representative per isomorphism class.
//!
//! The crate is `no_std` (it needs `alloc`). Solver backends, file formats
//! and the command-line surface live in the `canonset` crate; everything
//! here talks to a solver through [`oracle::SatOracle`].

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod canonize;
pub mod cnf;
pub mod encodings;
mod error;
pub mod graph;
pub mod matrix;
pub mod oracle;
pub mod perm;
pub mod problems;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};
pub use graph::{EdgePosition, GraphAssignment};
pub use perm::Permutation;
