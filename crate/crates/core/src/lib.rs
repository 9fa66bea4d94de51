//! Exact computations around weak metacirculants of odd prime-power order:
//! permutation groups, metacyclic p-groups, Cayley/coset/multilayer
//! Petersen graphs, graph automorphisms, and the classification predicates.

pub mod analysis;
pub mod aut;
pub mod error;
pub mod graph;
pub mod groups;
pub mod perm;
pub mod scenarios;

pub use error::{Error, Result};
